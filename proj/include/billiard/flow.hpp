#pragma once

#include "billiard/geometry.hpp"
#include "billiard/sequences.hpp"

#include <string>
#include <vector>

namespace billiard {

struct FlowOptions {
    double initial_step = 1e-2;
    double atol = 1e-12;
    double rtol = 0.0;
    double max_step = 1.0;
    double stationarity_tol = 1e-10;
    double displacement_tol = 1e-12;
    double max_time = 1e6;
    long max_steps = 2'000'000;
    double sigma_delta_guard = 0.0;
    int record_every = 25;
    // When positive, steps are clipped so samples land exactly on multiples of this time.
    double record_interval = 0.0;
    bool store_trajectory = false;
    double tangency_tol = 1e-9;
    // Consecutive tangent samples tolerated before giving up.
    int tangency_patience = 2000;
};

enum class FlowStatus { Converged, Plateau, SigmaViolation, NonMonotoneAction, CrossingIncrease, UnresolvedTangency };

std::string to_string(FlowStatus s);

struct ActionSample {
    double t;
    double W;
    double grad_sq;     // sum of F_j^2
    double error_bound; // allowed decrease at this sample
};

struct CrossingSample {
    double t;
    int index;
    bool tangent;
};

struct TrajectorySample {
    double t;
    PeriodicLift lift;
};

struct FlowResult {
    PeriodicLift final_lift;
    bool converged = false;
    FlowStatus status = FlowStatus::Plateau;
    std::string diagnostic;
    double final_time = 0.0;
    double residual = 0.0;  // sup norm of F at final_lift
    long steps = 0;
    long rejected = 0;
    double max_constraint_residual = 0.0;
    // largest observed decrease of W divided by its allowance; below 1 means compliant
    double worst_action_ratio = 0.0;
    std::vector<ActionSample> action_history;
    std::vector<CrossingSample> crossing_history;
    std::vector<TrajectorySample> trajectory;
};

PeriodicLift project_affine(const PeriodicLift& lift, const AffineSystem& system);

// Gradient flow x' = F(x) on X_{p,q}; system and reference may be null.
FlowResult integrate(const Boundary& b, const PeriodicLift& start, const AffineSystem* system,
                     const FlowOptions& opts, const PeriodicLift* reference = nullptr);

// Strict ordering x(t) < y(t) at every stored sample with t > 0.
bool comparison_check(const FlowResult& x_run, const FlowResult& y_run);

}  // namespace billiard
