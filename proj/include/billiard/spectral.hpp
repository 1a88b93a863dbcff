#pragma once

#include "billiard/geometry.hpp"
#include "billiard/sequences.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>

namespace billiard {

struct CirculantHessian {
    int p = 0;
    double alpha = 0.0;  // the diagonal holds 2 alpha
    double beta = 0.0;
    Eigen::MatrixXd matrix() const;
};

struct AlphaBeta {
    double alpha, beta, c, L, kappa;
};

// kappa and L at the symmetric Birkhoff orbit X_i = A/(2n) + (m/n) i; any parametrization.
struct KappaL {
    double kappa, L;
};
KappaL birkhoff_kappa_L(const Boundary& b, int n, int m, int A);

AlphaBeta alpha_beta(const Boundary& b, int n, int m, int A);

struct HessianResult {
    Eigen::MatrixXd H;
    bool stationary = true;
    double residual = 0.0;
};
// Hessian of W_{p,q} at X from the exact second partials; needs a constant-speed boundary.
HessianResult hessian(const Boundary& b, const PeriodicLift& X);

struct ModeEigenpair {
    double lambda;
    Eigen::VectorXd v, w;
};
ModeEigenpair mode_eigenpair(double alpha, double beta, int p, int N);

enum class CriterionKind { Main, TypeI, TypeII, TypeV };
std::string to_string(CriterionKind k);
CriterionKind criterion_kind_from_string(const std::string& s);

struct CriterionReport {
    CriterionKind kind = CriterionKind::Main;
    int n = 0, m = 0, N = 0, s = 0, p = 0, q = 0;
    double kappa = 0.0, L = 0.0, lhs = 0.0, rhs = 0.0, margin = 0.0;
    int predicted_crossings = 0;
    int predicted_min_period = 0;
    bool holds() const { return margin > 0.0; }
    std::string verdict() const { return holds() ? "criterion holds" : "criterion inconclusive"; }
};

// Throws std::invalid_argument naming the failing arithmetic condition.
void validate_criterion(CriterionKind kind, int n, int m, int N, int s);
double criterion_rhs(CriterionKind kind, int n, int m, int N, int s);
CriterionReport criterion(CriterionKind kind, int n, int m, int N, int s, double kappa, double L);

// Bezout coefficients: B m + C n = gcd(m, n).
struct Bezout {
    long B, C, g;
};
Bezout extended_gcd(long m, long n);

// Time shifts of rho^{sm} and sigma = R^b S for the main theorem.
struct SubgroupShifts {
    long K;
    long k;
    std::optional<long> k_other_parity;  // n odd and p even
};
SubgroupShifts subgroup_shifts(int n, int m, int A, int N, int b, int s);

}  // namespace billiard
