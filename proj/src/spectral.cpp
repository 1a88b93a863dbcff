#include "billiard/spectral.hpp"

#include "billiard/lagrangian.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace billiard {

namespace {
constexpr double kPi = std::numbers::pi;

long pos_mod(long a, long b) { return ((a % b) + b) % b; }
}  // namespace

Eigen::MatrixXd CirculantHessian::matrix() const {
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(p, p);
    for (int i = 0; i < p; ++i) {
        H(i, i) += 2.0 * alpha;
        H(i, (i + 1) % p) += beta;
        H((i + 1) % p, i) += beta;
    }
    return H;
}

KappaL birkhoff_kappa_L(const Boundary& b, int n, int m, int A) {
    const auto X = symmetric_birkhoff(n, m, A);
    return {curvature_at(b, X.at(1)), chord_length(b, X.at(1), X.at(2))};
}

AlphaBeta alpha_beta(const Boundary& b, int n, int m, int A) {
    if (!b.constant_speed()) throw std::invalid_argument("alpha_beta requires a constant-speed boundary");
    const auto [kappa, L] = birkhoff_kappa_L(b, n, m, A);
    const double c = b.total_length();
    const double sn = std::sin(m * kPi / n);
    return {c * c * sn * (sn / L - kappa), c * c * sn * sn / L, c, L, kappa};
}

HessianResult hessian(const Boundary& b, const PeriodicLift& X) {
    const int p = X.p();
    HessianResult r;
    r.H = Eigen::MatrixXd::Zero(p, p);
    for (int j = 1; j <= p; ++j) {
        const auto d = second_partials(b, X.at(j), X.at(j + 1));
        const int s = j - 1, e = j % p;
        r.H(s, s) += d.d11;
        r.H(e, e) += d.d22;
        r.H(s, e) += d.d12;
        r.H(e, s) += d.d12;
    }
    const auto F = gradient_field(b, X);
    for (double v : F) r.residual = std::max(r.residual, std::abs(v));
    r.stationary = r.residual < 1e-8;
    return r;
}

ModeEigenpair mode_eigenpair(double alpha, double beta, int p, int N) {
    if (N < 0 || 2 * N > p) throw std::invalid_argument("mode_eigenpair: need 0 <= N <= p/2");
    ModeEigenpair e;
    e.lambda = 2.0 * alpha + 2.0 * beta * std::cos(2.0 * kPi * N / p);
    e.v.resize(p);
    e.w.resize(p);
    for (int i = 1; i <= p; ++i) {
        e.v(i - 1) = std::sin(2.0 * kPi * N * i / p);
        e.w(i - 1) = std::cos(2.0 * kPi * N * i / p);
    }
    return e;
}

std::string to_string(CriterionKind k) {
    switch (k) {
        case CriterionKind::Main: return "main";
        case CriterionKind::TypeI: return "typeI";
        case CriterionKind::TypeII: return "typeII";
        case CriterionKind::TypeV: return "typeV";
    }
    return "unknown";
}

CriterionKind criterion_kind_from_string(const std::string& s) {
    if (s == "main") return CriterionKind::Main;
    if (s == "typeI") return CriterionKind::TypeI;
    if (s == "typeII") return CriterionKind::TypeII;
    if (s == "typeV") return CriterionKind::TypeV;
    throw std::invalid_argument("unknown theorem kind '" + s + "'");
}

void validate_criterion(CriterionKind kind, int n, int m, int N, int s) {
    auto fail = [](const std::string& what) { throw std::invalid_argument(what); };
    if (n < 2) fail("n must be at least 2");
    if (m < 1 || m >= n) fail("m must satisfy 1 <= m < n");
    if (gcd_int(m, n) != 1) fail("gcd(m, n) = " + std::to_string(gcd_int(m, n)) + " is not 1");
    if (kind == CriterionKind::Main) {
        if (N < 1) fail("N must be positive");
        if (n % N != 0) fail("N = " + std::to_string(N) + " does not divide n = " + std::to_string(n));
        if (s < 2) fail("s must be at least 2");
        if (gcd_int(s, N) != 1) fail("gcd(s, N) = " + std::to_string(gcd_int(s, N)) + " is not 1");
        return;
    }
    if (n != 2 || m != 1) fail(to_string(kind) + " requires (n, m) = (2, 1)");
    if (kind == CriterionKind::TypeI) {
        if (s < 3 || s % 2 == 0) fail("typeI requires odd s >= 3");
    } else if (s < 2) {
        fail(to_string(kind) + " requires s >= 2");
    }
}

double criterion_rhs(CriterionKind kind, int n, int m, int N, int s) {
    validate_criterion(kind, n, m, N, s);
    switch (kind) {
        case CriterionKind::Main: {
            const double c = std::cos(N * kPi / (static_cast<double>(s) * n));
            return 2.0 * std::sin(m * kPi / n) * c * c;
        }
        case CriterionKind::TypeI: {
            const double c = std::cos(2.0 * kPi / (2.0 * s));
            return 2.0 * c * c;
        }
        case CriterionKind::TypeII:
        case CriterionKind::TypeV: {
            const double c = std::cos(kPi / (2.0 * s));
            return 2.0 * c * c;
        }
    }
    return 0.0;
}

CriterionReport criterion(CriterionKind kind, int n, int m, int N, int s, double kappa, double L) {
    CriterionReport r;
    r.kind = kind;
    r.rhs = criterion_rhs(kind, n, m, N, s);
    r.n = n;
    r.m = m;
    r.s = s;
    r.p = s * n;
    r.q = s * m;
    switch (kind) {
        case CriterionKind::Main: r.N = N; break;
        case CriterionKind::TypeI:
        case CriterionKind::TypeII: r.N = 2; break;
        case CriterionKind::TypeV: r.N = 1; break;
    }
    r.kappa = kappa;
    r.L = L;
    r.lhs = kappa * L;
    r.margin = r.rhs - r.lhs;
    r.predicted_crossings = kind == CriterionKind::Main ? 2 * N : (kind == CriterionKind::TypeI ? 4 : 2);
    r.predicted_min_period = r.p;
    return r;
}

Bezout extended_gcd(long m, long n) {
    long old_r = m, r = n, old_s = 1, s = 0, old_t = 0, t = 1;
    while (r != 0) {
        const long qt = old_r / r;
        long tmp = old_r - qt * r;
        old_r = r, r = tmp;
        tmp = old_s - qt * s;
        old_s = s, s = tmp;
        tmp = old_t - qt * t;
        old_t = t, t = tmp;
    }
    if (old_r < 0) old_r = -old_r, old_s = -old_s, old_t = -old_t;
    return {old_s, old_t, old_r};
}

SubgroupShifts subgroup_shifts(int n, int m, int A, int N, int b, int s) {
    validate_criterion(CriterionKind::Main, n, m, N, s);
    const long p = static_cast<long>(s) * n;
    const long K = static_cast<long>(s) * n / N;
    const auto bz = extended_gcd(m, n);
    SubgroupShifts r{K, pos_mod(bz.B * (b - A), p), std::nullopt};
    if (n % 2 == 1 && p % 2 == 0) {
        long alt = pos_mod(r.k + n, p);
        r.k_other_parity = alt;
        if (r.k % 2 != 0) std::swap(r.k, *r.k_other_parity);  // k holds the even one
    }
    return r;
}

}  // namespace billiard
