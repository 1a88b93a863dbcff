#include "billiard/flow.hpp"

#include "billiard/lagrangian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

namespace billiard {

std::string to_string(FlowStatus s) {
    switch (s) {
        case FlowStatus::Converged: return "converged";
        case FlowStatus::Plateau: return "non_converged_plateau";
        case FlowStatus::SigmaViolation: return "sigma_violation";
        case FlowStatus::NonMonotoneAction: return "non_monotone_action";
        case FlowStatus::CrossingIncrease: return "crossing_increase";
        case FlowStatus::UnresolvedTangency: return "unresolved_tangency";
    }
    return "unknown";
}

PeriodicLift project_affine(const PeriodicLift& lift, const AffineSystem& system) {
    if (system.A.cols() != lift.p()) throw std::invalid_argument("project_affine: size mismatch");
    return PeriodicLift::from_vector(lift.p(), lift.q(), system.project(lift.vector()));
}

namespace {

using Vec = Eigen::VectorXd;

// Dormand-Prince 5(4)
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

struct Field {
    const Boundary& b;
    const AffineSystem* sys;
    int p, q;

    Vec raw(const Vec& x) const {
        const auto F = gradient_field(b, PeriodicLift::from_vector(p, q, x));
        return Eigen::Map<const Vec>(F.data(), p);
    }
    Vec operator()(const Vec& x) const {
        Vec F = raw(x);
        if (sys && sys->A.rows() > 0) F = sys->null_basis * (sys->null_basis.transpose() * F);
        return F;
    }
};

double action_of(const Boundary& b, const Vec& x, int p, int q) {
    return periodic_action(b, PeriodicLift::from_vector(p, q, x));
}

bool inside_guard(const Vec& x, int q, double guard) {
    const int p = static_cast<int>(x.size());
    for (int i = 0; i < p; ++i) {
        const double next = (i + 1 < p) ? x(i + 1) : x(0) + q;
        const double d = next - x(i);
        if (!(d > guard && d < 1.0 - guard)) return false;
    }
    return true;
}

}  // namespace

FlowResult integrate(const Boundary& b, const PeriodicLift& start, const AffineSystem* system,
                     const FlowOptions& opts, const PeriodicLift* reference) {
    if (!(opts.stationarity_tol > 0.0)) throw std::invalid_argument("stationarity_tol must be positive");
    if (!(opts.sigma_delta_guard >= 0.0 && opts.sigma_delta_guard < 0.5)) {
        throw std::invalid_argument("sigma_delta_guard must lie in [0, 1/2)");
    }
    const double guard = std::max(opts.sigma_delta_guard, 1e-6);
    if (!in_sigma_delta(start, opts.sigma_delta_guard) || !in_sigma(start)) {
        throw std::invalid_argument("start lift is not in Sigma_delta");
    }
    const int p = start.p(), q = start.q();
    if (system && system->residual(start.vector()) > 1e-9) {
        throw std::invalid_argument("start lift does not satisfy the symmetry constraints");
    }
    if (reference && (reference->p() != p || reference->q() != q)) {
        throw std::invalid_argument("reference lift must share (p, q)");
    }

    Field f{b, system, p, q};
    FlowResult res;
    Vec x = start.vector();
    if (system) x = system->project(x);
    double t = 0.0;
    double h = std::min(opts.initial_step, opts.max_step);
    double W = action_of(b, x, p, q);
    Vec F = f.raw(x);
    double Fnorm = F.cwiseAbs().maxCoeff();
    double last_disp = std::numeric_limits<double>::infinity();
    Vec best = x;
    double best_norm = Fnorm;
    int last_cross = std::numeric_limits<int>::max();
    int tangent_run = 0;
    double allowance = 0.0;
    double next_record = opts.record_interval > 0.0 ? opts.record_interval : 0.0;

    auto record = [&](bool force_traj) -> bool {
        res.action_history.push_back({t, W, F.squaredNorm(), allowance});
        if (system) res.max_constraint_residual = std::max(res.max_constraint_residual, system->residual(x));
        if (opts.store_trajectory || force_traj) {
            res.trajectory.push_back({t, PeriodicLift::from_vector(p, q, x)});
        }
        if (reference) {
            const auto I = intersection_index(PeriodicLift::from_vector(p, q, x), *reference, opts.tangency_tol);
            res.crossing_history.push_back({t, I.count, I.tangent});
            if (I.tangent) {
                if (++tangent_run > opts.tangency_patience) {
                    res.status = FlowStatus::UnresolvedTangency;
                    res.diagnostic = "tangency with the reference did not resolve";
                    return false;
                }
            } else {
                tangent_run = 0;
                if (I.count > last_cross) {
                    res.status = FlowStatus::CrossingIncrease;
                    res.diagnostic = "intersection index increased from " + std::to_string(last_cross) +
                                     " to " + std::to_string(I.count) + " at t=" + std::to_string(t);
                    return false;
                }
                last_cross = I.count;
            }
        }
        return true;
    };

    auto finish = [&](const Vec& final_x) {
        res.final_lift = PeriodicLift::from_vector(p, q, final_x);
        res.final_time = t;
        res.residual = f.raw(final_x).cwiseAbs().maxCoeff();
        return res;
    };

    if (!record(true)) return finish(x);
    if (Fnorm < opts.stationarity_tol) {
        res.converged = true;
        res.status = FlowStatus::Converged;
        return finish(x);
    }

    long since_record = 0;
    const double eps = std::numeric_limits<double>::epsilon();
    while (true) {
        if (t >= opts.max_time || res.steps >= opts.max_steps) {
            res.status = FlowStatus::Plateau;
            res.diagnostic = "stopped at t=" + std::to_string(t) + " with |F| = " + std::to_string(best_norm);
            x = best;
            W = action_of(b, x, p, q);
            F = f.raw(x);
            record(true);
            return finish(best);
        }
        double step = std::min({h, opts.max_step, opts.max_time - t});
        bool hits_record = false;
        if (opts.record_interval > 0.0 && t + step >= next_record - 1e-12) {
            step = next_record - t;
            hits_record = true;
        }

        std::optional<Vec> x_new;
        Vec err;
        try {
            const Vec k1 = f(x);
            const Vec k2 = f(x + step * a21 * k1);
            const Vec k3 = f(x + step * (a31 * k1 + a32 * k2));
            const Vec k4 = f(x + step * (a41 * k1 + a42 * k2 + a43 * k3));
            const Vec k5 = f(x + step * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
            const Vec k6 = f(x + step * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
            const Vec y = x + step * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
            const Vec k7 = f(y);
            err = step * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
            x_new = y;
        } catch (const std::domain_error&) {
            // a stage left Sigma; shrink and retry
        }

        double err_norm = std::numeric_limits<double>::infinity();
        if (x_new) {
            err_norm = 0.0;
            for (int i = 0; i < p; ++i) {
                err_norm = std::max(err_norm, std::abs(err(i)) / (opts.atol + opts.rtol * std::abs((*x_new)(i))));
            }
        }
        if (!x_new || err_norm > 1.0) {
            ++res.rejected;
            const double fac = x_new ? std::max(0.2, 0.9 * std::pow(err_norm, -0.2)) : 0.25;
            h = step * fac;
            if (h < 1e-14) {
                res.status = FlowStatus::SigmaViolation;
                res.diagnostic = "step size underflow near the boundary of Sigma at t=" + std::to_string(t);
                return finish(x);
            }
            continue;
        }

        Vec y = *x_new;
        if (system) y = system->project(y);
        if (!inside_guard(y, q, guard)) {
            res.status = FlowStatus::SigmaViolation;
            res.diagnostic = "increment left the guarded region at t=" + std::to_string(t + step);
            return finish(x);
        }
        const double W_new = action_of(b, y, p, q);
        allowance = 10.0 * (F.cwiseAbs().dot(err.cwiseAbs()) + 4.0 * p * eps * std::abs(W));
        if (W_new < W) {
            res.worst_action_ratio = std::max(res.worst_action_ratio, (W - W_new) / allowance);
            if (W - W_new > allowance) {
                res.status = FlowStatus::NonMonotoneAction;
                res.diagnostic = "action decreased by " + std::to_string(W - W_new) + " at t=" + std::to_string(t);
                return finish(x);
            }
        }

        last_disp = (y - x).cwiseAbs().maxCoeff();
        x = y;
        t += step;
        W = W_new;
        F = f.raw(x);
        Fnorm = F.cwiseAbs().maxCoeff();
        if (Fnorm < best_norm) {
            best_norm = Fnorm;
            best = x;
        }
        ++res.steps;
        ++since_record;

        const double fac = err_norm > 0.0 ? std::min(5.0, 0.9 * std::pow(err_norm, -0.2)) : 5.0;
        if (!hits_record) h = step * fac;

        const bool done = Fnorm < opts.stationarity_tol && last_disp < opts.displacement_tol;
        if (hits_record) next_record += opts.record_interval;
        if (hits_record || done || (opts.record_every > 0 && since_record >= opts.record_every)) {
            since_record = 0;
            if (!record(hits_record)) return finish(x);
        }
        if (done) {
            res.converged = true;
            res.status = FlowStatus::Converged;
            return finish(x);
        }
    }
}

bool comparison_check(const FlowResult& x_run, const FlowResult& y_run) {
    if (x_run.trajectory.empty() || y_run.trajectory.empty()) {
        throw std::invalid_argument("comparison_check needs stored trajectories");
    }
    const auto& x0 = x_run.trajectory.front().lift;
    const auto& y0 = y_run.trajectory.front().lift;
    if (x0.p() != y0.p() || x0.q() != y0.q()) throw std::invalid_argument("runs must share (p, q)");
    bool differs = false;
    for (int i = 0; i < x0.p(); ++i) {
        if (x0.coords()[i] > y0.coords()[i]) throw std::invalid_argument("x(0) <= y(0) is required");
        if (x0.coords()[i] < y0.coords()[i]) differs = true;
    }
    if (!differs) throw std::invalid_argument("x(0) and y(0) coincide");

    size_t j = 0;
    int compared = 0;
    for (const auto& xs : x_run.trajectory) {
        if (xs.t <= 0.0) continue;
        while (j < y_run.trajectory.size() && y_run.trajectory[j].t < xs.t - 1e-12) ++j;
        if (j == y_run.trajectory.size()) break;
        if (std::abs(y_run.trajectory[j].t - xs.t) > 1e-12) continue;
        ++compared;
        const auto& ys = y_run.trajectory[j].lift;
        for (int i = 0; i < x0.p(); ++i) {
            if (!(xs.lift.coords()[i] < ys.coords()[i])) return false;
        }
    }
    if (compared == 0) throw std::invalid_argument("runs share no sample times");
    return true;
}

}  // namespace billiard
