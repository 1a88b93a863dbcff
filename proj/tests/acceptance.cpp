// Acceptance checks, one line per criterion. Exit status is nonzero if any criterion fails.

#include "billiard/finder.hpp"
#include "billiard/flow.hpp"
#include "billiard/geometry.hpp"
#include "billiard/lagrangian.hpp"
#include "billiard/sequences.hpp"
#include "billiard/spectral.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace billiard;

namespace {

constexpr double kPi = std::numbers::pi;

struct Verdict {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << "[failed: " << what << "] ";
        }
    }
};

int failures = 0;

void criterion(int index, double limit_seconds, const std::function<void(Verdict&)>& body) {
    Verdict v;
    const auto start = std::chrono::steady_clock::now();
    try {
        body(v);
    } catch (const std::exception& e) {
        v.pass = false;
        v.detail << "[exception: " << e.what() << "] ";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs >= limit_seconds) {
        v.pass = false;
        v.detail << "[over time limit " << limit_seconds << " s] ";
    }
    std::printf("%s criterion %d: %s(%.3f s)\n", v.pass ? "PASS" : "FAIL", index, v.detail.str().c_str(), secs);
    std::fflush(stdout);
    failures += !v.pass;
}

SearchRequest limacon_request(int n, double alpha, CriterionKind kind, int m, int N, int s) {
    SearchRequest r;
    r.boundary.family = "limacon";
    r.boundary.n = n;
    r.boundary.alpha = alpha;
    r.kind = kind;
    r.n = n;
    r.m = m;
    r.N = N;
    r.s = s;
    return r;
}

double threshold_by_bisection(int n) {
    double lo = 0.0, hi = 0.5;
    while (hi - lo > 1e-9) {
        const double mid = 0.5 * (lo + hi);
        (convexity_margin(make_limacon(n, mid)) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

Eigen::MatrixXd fd_hessian(const Boundary& b, const PeriodicLift& X, double h) {
    const int p = X.p();
    Eigen::MatrixXd H(p, p);
    auto W = [&](int i, double di, int j, double dj) {
        auto y = X;
        y.coords()[i] += di;
        y.coords()[j] += dj;
        return periodic_action(b, y);
    };
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j) {
            H(i, j) = (W(i, h, j, h) - W(i, h, j, -h) - W(i, -h, j, h) + W(i, -h, j, -h)) / (4 * h * h);
        }
    }
    return H;
}

// z_i < z_j < z_k in counterclockwise order, read off the lift modulo 1
bool cyclic_between(double xi, double xj, double xk) {
    const double u = xj - xi - std::floor(xj - xi);
    const double v = xk - xi - std::floor(xk - xi);
    return u <= v;
}

// every ordered triple of one period, under every time shift of one period
bool birkhoff_by_triples(const PeriodicLift& x) {
    const int p = x.p();
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j) {
            for (int k = 0; k < p; ++k) {
                if (!cyclic_between(x.at(i), x.at(j), x.at(k))) continue;
                for (int m = 1; m < p; ++m) {
                    if (!cyclic_between(x.at(i + m), x.at(j + m), x.at(k + m))) return false;
                }
            }
        }
    }
    return true;
}

// x_i <= x_j + l implies x_{i+m} <= x_{j+m} + l, over one period of i, j, m
bool birkhoff_by_translates(const PeriodicLift& x) {
    const int p = x.p(), q = x.q();
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j) {
            for (int l = -q - 2; l <= q + 2; ++l) {
                if (!(x.at(i) <= x.at(j) + l)) continue;
                for (int m = 1; m < p; ++m) {
                    if (!(x.at(i + m) <= x.at(j + m) + l)) return false;
                }
            }
        }
    }
    return true;
}

}  // namespace

int main() {
    criterion(1, 5.0, [](Verdict& v) {
        double worst = 0.0;
        for (int n = 2; n <= 9; ++n) {
            const double found = threshold_by_bisection(n);
            worst = std::max(worst, std::abs(found - 1.0 / (1.0 + n * n)));
            v.require(std::abs(found - limacon_convexity_threshold(n)) < 1e-6, "threshold n=" + std::to_string(n));
        }
        v.require(worst < 1e-6, "bisection vs 1/(1+n^2)");
        const double table[][2] = {{2, 0.2}, {3, 0.1}, {4, 0.0588}, {5, 0.0385}};
        for (const auto& row : table) {
            v.require(std::abs(limacon_convexity_threshold(int(row[0])) - row[1]) < 5e-5,
                      "table value n=" + std::to_string(int(row[0])));
        }
        v.detail << "worst bisection error " << worst << " for n=2..9; ";
    });

    criterion(2, 10.0, [](Verdict& v) {
        const auto X = symmetric_birkhoff(4, 1, 1).repeated(3);
        for (const auto& [label, raw] : {std::pair<std::string, Boundary>{"circle", make_circle()},
                                         {"limacon(4,0.05)", make_limacon(4, 0.05)}}) {
            const auto b = reparametrize_constant_speed(raw);
            const auto H = hessian(b, X).H;
            const int p = X.p();
            double circulant = 0.0;
            for (int i = 0; i < p; ++i) {
                for (int j = 0; j < p; ++j) {
                    circulant = std::max(circulant, std::abs(H(i, j) - H((i + 1) % p, (j + 1) % p)));
                    const int d = std::min((i - j + p) % p, (j - i + p) % p);
                    if (d > 1) circulant = std::max(circulant, std::abs(H(i, j)));
                }
            }
            v.require(circulant < 1e-8, label + " circulant structure");

            const double alpha = H(0, 0) / 2, beta = H(0, 1);
            double eig = 0.0;
            for (int N = 0; N <= 6; ++N) {
                const auto e = mode_eigenpair(alpha, beta, p, N);
                v.require(std::abs(e.lambda - (2 * alpha + 2 * beta * std::cos(2 * kPi * N / p))) < 1e-12,
                          label + " eigenvalue formula");
                for (const auto* vec : {&e.v, &e.w}) {
                    if (vec->size() == 0 || vec->norm() == 0.0) continue;
                    eig = std::max(eig, (H * *vec - e.lambda * *vec).cwiseAbs().maxCoeff());
                }
            }
            v.require(eig < 1e-8, label + " eigenpairs");

            const auto F = fd_hessian(b, X, 1e-4);
            const double rel = (H - F).cwiseAbs().maxCoeff() / H.cwiseAbs().maxCoeff();
            v.require(rel < 1e-4, label + " finite differences");
            v.detail << label << ": circulant " << circulant << ", eigen " << eig << ", fd rel " << rel << "; ";
        }
    });

    criterion(3, 1.0, [](Verdict& v) {
        const double main = criterion_rhs(CriterionKind::Main, 4, 1, 4, 3);
        const double two = criterion_rhs(CriterionKind::TypeII, 2, 1, 2, 4);
        v.require(std::abs(main - 2 * std::sin(kPi / 4) * std::pow(std::cos(kPi / 3), 2)) < 1e-12, "main closed form");
        v.require(std::abs(main - 0.3535533906) < 1e-10, "main value");
        v.require(std::abs(two - 2 * std::pow(std::cos(kPi / 8), 2)) < 1e-12, "typeII closed form");
        v.require(std::abs(two - 1.7071067812) < 1e-10, "typeII value");

        std::mt19937 rng(7);
        std::uniform_int_distribution<int> kd(0, 3), nd(2, 9), sd(2, 15);
        std::uniform_real_distribution<double> rd(0.3, 5.0);
        const CriterionKind kinds[] = {CriterionKind::Main, CriterionKind::TypeI, CriterionKind::TypeII,
                                       CriterionKind::TypeV};
        int tuples = 0, attempts = 0;
        double largest = -1e300;
        while (tuples < 50 && attempts < 100000) {
            ++attempts;
            const auto kind = kinds[kd(rng)];
            const int n = kind == CriterionKind::Main ? nd(rng) : 2;
            const int m = std::uniform_int_distribution<int>(1, n - 1)(rng);
            const int N = std::uniform_int_distribution<int>(1, n)(rng);
            const int s = sd(rng);
            try {
                validate_criterion(kind, n, m, N, s);
            } catch (const std::invalid_argument&) {
                continue;
            }
            const auto c = make_circle(rd(rng));
            const auto kl = birkhoff_kappa_L(c, n, m, 1);
            const double margin = billiard::criterion(kind, n, m, N, s, kl.kappa, kl.L).margin;
            largest = std::max(largest, margin);
            ++tuples;
        }
        v.require(tuples == 50, "50 valid tuples");
        v.require(largest <= 0.0, "circle margins");
        v.detail << "rhs " << main << " / " << two << ", largest circle margin " << largest << " over " << tuples
                 << " tuples; ";
    });

    criterion(4, 30.0, [](Verdict& v) {
        const auto r = find_orbit(limacon_request(4, 0.05, CriterionKind::Main, 1, 4, 3));
        v.require(r.outcome == Outcome::NonBirkhoffFound, "outcome " + to_string(r.outcome));
        v.require(r.minimal_period == 12, "minimal period");
        v.require(r.winding == 3, "winding");
        v.require(r.group.rotations == 4 && r.group.reflections == 4, "group D4");
        v.require(!r.crossings.tangent && r.crossings.count == 8, "8 crossings");
        v.require(r.action_final > r.action_reference, "action gain");
        v.require(r.residual < 1e-10, "residual");
        v.detail << "(12,3) orbit, group order " << r.group.order() << ", crossings " << r.crossings.count
                 << ", gain " << r.action_gain << ", residual " << r.residual << "; ";
    });

    criterion(5, 60.0, [](Verdict& v) {
        const auto two = find_orbit(limacon_request(2, 0.19, CriterionKind::TypeII, 1, 2, 4));
        v.require(two.outcome == Outcome::NonBirkhoffFound, "typeII outcome");
        v.require(two.group.type_label == "II", "typeII label " + two.group.type_label);
        v.require(two.minimal_period == 8 && two.winding == 4, "typeII (8,4)");
        const auto* R = two.group.find(1, false);
        bool odd = R && R->reversing();
        if (R) {
            for (long k : R->reversing_shifts) odd = odd && (k % 2 != 0);
        }
        v.require(odd, "odd reversing shift of the rotation");

        const auto five = find_orbit(limacon_request(2, 0.1, CriterionKind::TypeV, 1, 1, 5));
        v.require(five.outcome == Outcome::NonBirkhoffFound, "typeV outcome");
        v.require(five.group.type_label == "V", "typeV label " + five.group.type_label);
        v.require(five.minimal_period == 10 && five.winding == 5, "typeV (10,5)");
        double worst = 1e300;
        for (const auto& e : five.group.elements) {
            if (!e.reflect || !e.preserving() || !e.reversing()) continue;
            double r = 0.0;
            for (long k : e.preserving_shifts) r = std::max(r, relation_residual(five.final_lift, 2, e.a, true, false, k));
            for (long k : e.reversing_shifts) r = std::max(r, relation_residual(five.final_lift, 2, e.a, true, true, k));
            worst = std::min(worst, r);
        }
        v.require(worst < 1e-8, "reflection both preserving and reversing");
        v.detail << "type II (8,4) rotation shift " << (R && R->reversing() ? R->reversing_shifts.front() : 0)
                 << "; type V (10,5) relation residual " << worst << "; ";
    });

    criterion(6, 120.0, [](Verdict& v) {
        const SearchRequest reqs[] = {limacon_request(4, 0.05, CriterionKind::Main, 1, 4, 3),
                                      limacon_request(2, 0.19, CriterionKind::TypeII, 1, 2, 4),
                                      limacon_request(7, 0.015, CriterionKind::Main, 2, 1, 2)};
        std::mt19937 rng(20240611);
        int runs = 0;
        double worst_constraint = 0.0, worst_ratio = 0.0;
        for (int t = 0; t < 20; ++t) {
            const auto& req = reqs[t % 3];
            const auto b = req.boundary.build();
            const auto st = prepare_search(req);
            // random direction in the symmetric subspace, scaled to stay inside the lift space
            Eigen::VectorXd c(st.system.dimension());
            std::normal_distribution<double> g(0.0, 1.0);
            for (int i = 0; i < c.size(); ++i) c[i] = g(rng);
            Eigen::VectorXd dir = st.system.null_basis * c;
            const double amp = std::uniform_real_distribution<double>(0.2, 0.6)(rng) / (2.0 * st.p);
            dir *= amp / dir.cwiseAbs().maxCoeff();
            const auto start = PeriodicLift::from_vector(st.p, st.q, st.reference.vector() + dir);
            if (!in_sigma(start)) {
                v.require(false, "start outside the lift space");
                continue;
            }

            FlowOptions o;
            o.record_every = 1;
            o.store_trajectory = true;
            const auto r = integrate(b, start, &st.system, o, &st.reference);
            ++runs;

            bool action_ok = true;
            for (size_t i = 1; i < r.action_history.size(); ++i) {
                const auto& a = r.action_history[i - 1];
                const auto& c2 = r.action_history[i];
                action_ok = action_ok && c2.W >= a.W - c2.error_bound;
            }
            v.require(action_ok, "action monotone run " + std::to_string(t));

            int last = r.crossing_history.empty() ? 0 : r.crossing_history.front().index;
            bool crossing_ok = true;
            for (const auto& s : r.crossing_history) {
                if (s.tangent) continue;
                crossing_ok = crossing_ok && s.index <= last;
                last = s.index;
            }
            v.require(crossing_ok, "crossings non-increasing run " + std::to_string(t));

            bool winding_ok = true;
            double constraint = 0.0;
            for (const auto& s : r.trajectory) {
                double total = 0.0;
                for (int i = 1; i <= s.lift.p(); ++i) total += s.lift.increment(i);
                winding_ok = winding_ok && std::abs(total - st.q) < 1e-9 && in_sigma(s.lift);
                constraint = std::max(constraint, st.system.residual(s.lift.vector()));
            }
            v.require(winding_ok, "winding run " + std::to_string(t));
            constraint = std::max(constraint, r.max_constraint_residual);
            v.require(constraint < 1e-12, "constraint residual run " + std::to_string(t));
            worst_constraint = std::max(worst_constraint, constraint);
            worst_ratio = std::max(worst_ratio, r.worst_action_ratio);
        }
        v.require(runs == 20, "20 runs");
        v.detail << runs << " runs, worst constraint residual " << worst_constraint << ", worst action ratio "
                 << worst_ratio << "; ";
    });

    criterion(7, 10.0, [](Verdict& v) {
        const int cases[][4] = {{4, 1, 4, 3}, {3, 1, 3, 4}, {5, 2, 5, 3}, {2, 1, 1, 3}};
        double worst = 0.0;
        for (const auto& c : cases) {
            auto req = limacon_request(c[0], 0.0, CriterionKind::Main, c[1], c[2], c[3]);
            req.boundary.family = "circle";
            req.force = true;
            const auto r = find_orbit(req);
            v.require(r.outcome == Outcome::CollapsedToBirkhoff, "collapsed n=" + std::to_string(c[0]));
            for (int i = 1; i <= r.final_lift.p(); ++i) {
                worst = std::max(worst, std::abs(r.final_lift.increment(i) - double(c[1]) / c[0]));
            }
        }
        v.require(worst < 1e-8, "increments m/n");
        v.detail << "4 circle runs collapsed, worst increment deviation " << worst << "; ";
    });

    criterion(8, 60.0, [](Verdict& v) {
        auto req = limacon_request(7, 0.015, CriterionKind::Main, 2, 1, 2);
        req.parity = KParity::Even;
        const auto even = find_orbit(req);
        req.parity = KParity::Odd;
        const auto odd = find_orbit(req);
        v.require(even.k % 2 == 0 && odd.k % 2 == 1, "shift parities");
        for (const auto* r : {&even, &odd}) {
            v.require(r->outcome == Outcome::NonBirkhoffFound, "outcome " + to_string(r->outcome));
            v.require(r->minimal_period == 14 && r->winding == 4, "(14,4)");
            v.require(!r->is_birkhoff, "non-Birkhoff");
        }
        v.require(!geometrically_equal(even.final_lift, odd.final_lift), "geometrically distinct");
        v.detail << "k=" << even.k << " and k=" << odd.k << " give distinct (14,4) orbits; ";
    });

    criterion(9, 10.0, [](Verdict& v) {
        std::mt19937 rng(99);
        std::uniform_int_distribution<int> pd(2, 12);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        int lifts = 0, birkhoff = 0, mismatches = 0;
        while (lifts < 200) {
            const int p = pd(rng);
            const int q = std::uniform_int_distribution<int>(1, p - 1)(rng);
            const double amp = u(rng) * 0.8 / p;
            std::vector<double> c(p);
            for (int i = 1; i <= p; ++i) c[i - 1] = double(q) * i / p + amp * (2 * u(rng) - 1);
            PeriodicLift x(p, q, c);
            if (!in_sigma(x)) continue;
            const bool oracle = birkhoff_by_translates(x);
            mismatches += is_birkhoff(x) != oracle;
            mismatches += birkhoff_by_triples(x) != oracle;
            birkhoff += oracle;
            ++lifts;
        }
        v.require(mismatches == 0, std::to_string(mismatches) + " disagreements");
        v.require(birkhoff > 0 && birkhoff < lifts, "both classes sampled");
        v.detail << lifts << " lifts, " << birkhoff << " Birkhoff, " << mismatches << " disagreements; ";
    });

    return failures == 0 ? 0 : 1;
}
