#include "billiard/finder.hpp"

#include "billiard/lagrangian.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace billiard {

namespace {

constexpr double kPi = std::numbers::pi;

long pos_mod(long a, long b) { return ((a % b) + b) % b; }

double relation_value(const PeriodicLift& X, int n, int g, SymmetryKind kind, long k, long i) {
    const double shift = static_cast<double>(g) / n;
    const double di = static_cast<double>(i);
    switch (kind) {
        case SymmetryKind::RotationPreserving: return X.at(k + i) - X.at(i) - shift;
        case SymmetryKind::RotationReversing: return X.at(k - i) - X.at(i) + di - shift;
        case SymmetryKind::ReflectionPreserving: return X.at(i) + X.at(k + i) - di - shift;
        case SymmetryKind::ReflectionReversing: return X.at(i) + X.at(k - i) - shift;
    }
    return 0.0;
}

// Generator carried by the reference orbit X, with the integer offset read off X.
Generator generator_on(const PeriodicLift& X, int n, SymmetryKind kind, int g, long k) {
    const double v = relation_value(X, n, g, kind, k, 1);
    const long M = std::lround(v);
    for (long i = 1; i <= 2L * X.p(); ++i) {
        if (std::abs(relation_value(X, n, g, kind, k, i) - static_cast<double>(M)) > 1e-12) {
            throw std::logic_error("reference orbit does not carry the requested symmetry");
        }
    }
    return {kind, g, k, M};
}

double sup_distance(const PeriodicLift& a, const PeriodicLift& b) {
    double d = 0.0;
    for (int i = 0; i < a.p(); ++i) d = std::max(d, std::abs(a.coords()[i] - b.coords()[i]));
    return d;
}

}  // namespace

Boundary BoundarySpec::build() const {
    if (family == "limacon") return make_limacon(n, alpha);
    if (family == "ellipse") return make_ellipse(a, b);
    if (family == "circle") return make_circle(radius);
    throw std::invalid_argument("unknown billiard family '" + family + "'");
}

std::string BoundarySpec::describe() const {
    std::ostringstream s;
    if (family == "limacon") s << "limacon(n=" << n << ", alpha=" << alpha << ")";
    else if (family == "ellipse") s << "ellipse(a=" << a << ", b=" << b << ")";
    else s << "circle(r=" << radius << ")";
    return s.str();
}

std::string to_string(Outcome o) {
    switch (o) {
        case Outcome::NonBirkhoffFound: return "non_birkhoff_found";
        case Outcome::CollapsedToBirkhoff: return "collapsed_to_birkhoff";
        case Outcome::HitBoundaryOrbit: return "hit_boundary_orbit";
        case Outcome::NonConverged: return "non_converged";
    }
    return "unknown";
}

CriterionReport evaluate_criterion(const SearchRequest& req, const Boundary& b) {
    validate_criterion(req.kind, req.n, req.m, req.N, req.s);
    const int order = b.symmetry_order();
    if (order != 0 && order % req.n != 0) {
        throw std::invalid_argument("billiard is not D_" + std::to_string(req.n) + "-symmetric");
    }
    const auto [kappa, L] = birkhoff_kappa_L(b, req.n, req.m, req.A);
    return criterion(req.kind, req.n, req.m, req.N, req.s, kappa, L);
}

SearchSetup prepare_search(const SearchRequest& req) {
    validate_criterion(req.kind, req.n, req.m, req.N, req.s);
    SearchSetup st;
    const int n = req.n, m = req.m, s = req.s;
    st.p = s * n;
    st.q = s * m;
    st.reference = symmetric_birkhoff(n, m, req.A).repeated(s);
    st.symmetry.n = n;
    const auto& X = st.reference;

    switch (req.kind) {
        case CriterionKind::Main:
        case CriterionKind::TypeI: {
            const int N = req.kind == CriterionKind::TypeI ? 2 : req.N;
            const auto sh = subgroup_shifts(n, m, req.A, N, req.b, s);
            st.K = sh.K;
            st.k = sh.k;
            if (req.parity != KParity::Auto) {
                const bool want_even = req.parity == KParity::Even;
                if ((st.k % 2 == 0) != want_even) {
                    if (!sh.k_other_parity) {
                        throw std::invalid_argument("only one parity of k exists unless n is odd and p even");
                    }
                    st.k = *sh.k_other_parity;
                }
            }
            if (req.shift) st.k = *req.shift;
            if (st.K < 3) throw std::invalid_argument("K = s n / N must be at least 3");
            const int a = static_cast<int>(pos_mod(static_cast<long>(n / N) * s * m, n));
            st.symmetry.generators.push_back(generator_on(X, n, SymmetryKind::RotationPreserving, a, st.K));
            st.symmetry.generators.push_back(
                generator_on(X, n, SymmetryKind::ReflectionReversing, static_cast<int>(pos_mod(req.b, n)), st.k));
            break;
        }
        case CriterionKind::TypeII: {
            st.K = req.shift.value_or(1);
            if (pos_mod(st.K, 2) != 1) throw std::invalid_argument("typeII needs an odd shift K");
            const int sigma = static_cast<int>(pos_mod(req.A + s, 2));
            st.k = s;
            st.symmetry.generators.push_back(generator_on(X, n, SymmetryKind::RotationReversing, 1, st.K));
            st.symmetry.generators.push_back(generator_on(X, n, SymmetryKind::ReflectionPreserving, sigma, s));
            break;
        }
        case CriterionKind::TypeV: {
            st.K = st.p;
            st.k = req.shift.value_or(s);
            if (pos_mod(st.k - s, 2) != 0) throw std::invalid_argument("typeV needs k with the parity of s");
            const int sigma = static_cast<int>(pos_mod(req.A + s, 2));
            st.symmetry.generators.push_back(generator_on(X, n, SymmetryKind::ReflectionPreserving, sigma, s));
            st.symmetry.generators.push_back(generator_on(X, n, SymmetryKind::ReflectionReversing, sigma, st.k));
            break;
        }
    }
    st.system = expand_constraints(st.symmetry, st.p, st.q);
    const auto xhat = initial_perturbation(req.kind, X, n, st.K, st.k, 1.0 / (4.0 * n));
    st.mode = (xhat.vector() - X.vector()) * (4.0 * n);
    return st;
}

PeriodicLift initial_perturbation(CriterionKind kind, const PeriodicLift& X, int n, long K, long k, double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0 / (2.0 * n))) {
        throw std::invalid_argument("epsilon must lie in (0, 1/(2n))");
    }
    const int p = X.p();
    if (kind != CriterionKind::TypeII && kind != CriterionKind::TypeV && K < 3) {
        throw std::invalid_argument("degenerate mode: K must be at least 3");
    }
    std::vector<double> c(p);
    for (int i = 1; i <= p; ++i) {
        double v = 0.0;
        switch (kind) {
            case CriterionKind::Main:
            case CriterionKind::TypeI:
                v = std::sin(2.0 * kPi * i / K - kPi * k / K);
                break;
            case CriterionKind::TypeII:
                v = std::cos(2.0 * kPi * i / p - kPi * K / p);
                break;
            case CriterionKind::TypeV:
                v = std::sin(2.0 * kPi * i / p - kPi * k / p);
                break;
        }
        c[i - 1] = X.at(i) + epsilon * v;
    }
    return PeriodicLift(p, X.q(), std::move(c));
}

void classify_into(OrbitReport& r, const Boundary& b, int n) {
    const auto& x = r.final_lift;
    r.is_birkhoff = is_birkhoff(x);
    r.minimal_period = minimal_period(x);
    r.winding = x.q();
    r.group = spatiotemporal_group(x, n);
    if (r.reference.p() == x.p() && r.reference.q() == x.q()) {
        r.crossings = intersection_index(x, r.reference);
        r.action_reference = periodic_action(b, r.reference);
    }
    r.action_final = periodic_action(b, x);
    r.action_gain = r.action_final - r.action_reference;
    r.residual = 0.0;
    for (double v : gradient_field(b, x)) r.residual = std::max(r.residual, std::abs(v));
}

OrbitReport find_orbit(const SearchRequest& req) { return find_orbit(req, req.boundary.build()); }

OrbitReport find_orbit(const SearchRequest& req, const Boundary& b) {
    OrbitReport r;
    r.request = req;
    r.criterion = evaluate_criterion(req, b);
    if (convexity_margin(b) < 0.0) throw std::invalid_argument("billiard is not strictly convex");
    if (!r.criterion.holds()) {
        if (!req.force) {
            throw CriterionInconclusive("criterion inconclusive (margin " + std::to_string(r.criterion.margin) +
                                    "); pass force to run anyway");
        }
        r.warnings.push_back("criterion inconclusive; running on request");
    }

    const auto st = prepare_search(req);
    r.reference = st.reference;
    r.K = st.K;
    r.k = st.k;
    const double W0 = periodic_action(b, st.reference);
    double eps = req.epsilon.value_or(std::min(1.0 / (4.0 * req.n), 1e-2));
    PeriodicLift start = initial_perturbation(req.kind, st.reference, req.n, st.K, st.k, eps);
    bool ascent = periodic_action(b, start) > W0;
    for (int halvings = 0; !ascent && halvings < 6; ++halvings) {
        eps *= 0.5;
        start = initial_perturbation(req.kind, st.reference, req.n, st.K, st.k, eps);
        ascent = periodic_action(b, start) > W0;
    }
    if (!ascent) {
        if (!req.force) {
            r.final_lift = st.reference;
            r.epsilon = eps;
            r.outcome = Outcome::NonConverged;
            r.diagnostic = "W(X + eps v) <= W(X) after 6 halvings of eps";
            classify_into(r, b, req.n);
            return r;
        }
        eps = req.epsilon.value_or(std::min(1.0 / (4.0 * req.n), 1e-2));
        start = initial_perturbation(req.kind, st.reference, req.n, st.K, st.k, eps);
        r.warnings.push_back("perturbation does not increase W; running on request");
    }
    r.epsilon = eps;

    const auto flow = integrate(b, start, &st.system, req.flow, &st.reference);
    r.final_lift = flow.final_lift;
    r.flow_status = flow.status;
    r.diagnostic = flow.diagnostic;
    r.flow_time = flow.final_time;
    r.flow_steps = flow.steps;
    r.worst_action_ratio = flow.worst_action_ratio;
    r.max_constraint_residual = flow.max_constraint_residual;
    classify_into(r, b, req.n);

    const double half = 1.0 / (2.0 * req.n);
    if (!flow.converged) {
        r.outcome = Outcome::NonConverged;
    } else if (sup_distance(r.final_lift, st.reference) < 1e-8) {
        r.outcome = Outcome::CollapsedToBirkhoff;
    } else if (sup_distance(r.final_lift, st.reference.shifted(half)) < 1e-8 ||
               sup_distance(r.final_lift, st.reference.shifted(-half)) < 1e-8) {
        r.outcome = Outcome::HitBoundaryOrbit;
    } else if (r.is_birkhoff) {
        r.outcome = Outcome::CollapsedToBirkhoff;
    } else {
        r.outcome = Outcome::NonBirkhoffFound;
    }

    if (r.outcome == Outcome::NonBirkhoffFound) {
        const auto& c = r.criterion;
        if (r.minimal_period != c.predicted_min_period) {
            r.anomalies.push_back("minimal period " + std::to_string(r.minimal_period) + " differs from predicted " +
                                  std::to_string(c.predicted_min_period));
        }
        if (r.crossings.tangent || r.crossings.count != c.predicted_crossings) {
            r.anomalies.push_back("crossings " + std::to_string(r.crossings.count) + " differ from predicted " +
                                  std::to_string(c.predicted_crossings));
        }
        if (r.group.order() != 2 * c.N) {
            r.anomalies.push_back("group order " + std::to_string(r.group.order()) + " differs from predicted " +
                                  std::to_string(2 * c.N));
        }
        const std::string want = req.kind == CriterionKind::TypeI    ? "I"
                                 : req.kind == CriterionKind::TypeII ? "II"
                                 : req.kind == CriterionKind::TypeV  ? "V"
                                                                     : "";
        if (!want.empty() && r.group.type_label != want) {
            r.anomalies.push_back("type " + r.group.type_label + " differs from predicted " + want);
        }
        if (!(r.action_gain > 0.0)) r.anomalies.push_back("action did not increase");
    }
    return r;
}

std::vector<SweepEntry> sweep(const SearchRequest& tmpl, SweepParameter what, const std::vector<double>& values,
                              bool run_flow, unsigned threads) {
    std::vector<SweepEntry> out(values.size());
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t i = next++; i < values.size(); i = next++) {
            auto& e = out[i];
            e.parameter = values[i];
            try {
                SearchRequest req = tmpl;
                if (what == SweepParameter::S) req.s = static_cast<int>(std::lround(values[i]));
                else req.boundary.alpha = values[i];
                const Boundary b = req.boundary.build();
                e.criterion = evaluate_criterion(req, b);
                if (run_flow && (e.criterion->holds() || req.force)) e.orbit = find_orbit(req, b);
            } catch (const std::exception& ex) {
                e.error = ex.what();
            }
        }
    };
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, std::max<size_t>(1, values.size()));
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return out;
}

}  // namespace billiard
