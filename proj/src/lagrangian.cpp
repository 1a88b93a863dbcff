#include "billiard/lagrangian.hpp"

#include "billiard/sequences.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace billiard {

namespace {

double integer_distance(double d) { return std::abs(d - std::round(d)); }

void require_distinct(double x, double X) {
    if (integer_distance(X - x) < kDiagonalGuard) {
        throw std::domain_error("chord undefined for coincident points");
    }
}

void require_window(double d) {
    if (d < -kDiagonalGuard || d > 1.0 + kDiagonalGuard) {
        throw std::invalid_argument("force needs x <= X <= x + 1");
    }
}

double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

}  // namespace

double chord_length(const Boundary& b, double x, double X) {
    return (b.gamma(X) - b.gamma(x)).norm();
}

double d1_chord(const Boundary& b, double x, double X) {
    require_distinct(x, X);
    const Vec2 u = b.gamma(x) - b.gamma(X);
    return u.dot(b.dgamma(x)) / u.norm();
}

double d2_chord(const Boundary& b, double x, double X) {
    require_distinct(x, X);
    const Vec2 u = b.gamma(X) - b.gamma(x);
    return u.dot(b.dgamma(X)) / u.norm();
}

ChordAngles chord_angles(const Boundary& b, double x, double X) {
    require_distinct(x, X);
    const Vec2 u = b.gamma(X) - b.gamma(x);
    const Vec2 t0 = b.dgamma(x), t1 = b.dgamma(X);
    return {std::atan2(cross(t0, u), t0.dot(u)), std::atan2(cross(u, t1), u.dot(t1))};
}

SecondPartials second_partials(const Boundary& b, double x, double X) {
    if (!b.constant_speed()) {
        throw std::invalid_argument("second_partials requires a constant-speed boundary");
    }
    const auto [theta, phi] = chord_angles(b, x, X);
    const double L = chord_length(b, x, X);
    const double c = b.total_length();
    const double st = std::sin(theta), sp = std::sin(phi);
    return {c * c * (st * st / L - curvature_at(b, x) * st), c * c * st * sp / L,
            c * c * (sp * sp / L - curvature_at(b, X) * sp)};
}

double force_minus(const Boundary& b, double x, double X) {
    const double d = X - x;
    require_window(d);
    if (std::abs(d) < kDiagonalGuard) return b.dgamma(x).norm();
    if (std::abs(d - 1.0) < kDiagonalGuard) return -b.dgamma(x).norm();
    return d2_chord(b, x, X);
}

double force_plus(const Boundary& b, double x, double X) {
    const double d = X - x;
    require_window(d);
    if (std::abs(d) < kDiagonalGuard) return -b.dgamma(x).norm();
    if (std::abs(d - 1.0) < kDiagonalGuard) return b.dgamma(x).norm();
    return d1_chord(b, x, X);
}

std::vector<double> gradient_field(const Boundary& b, const PeriodicLift& lift) {
    const int p = lift.p();
    for (int i = 1; i <= p; ++i) {
        const double inc = lift.at(i + 1) - lift.at(i);
        if (!(inc > 0.0 && inc < 1.0)) {
            throw std::domain_error("lift leaves Sigma at index " + std::to_string(i));
        }
    }
    // chord j joins x_j and x_{j+1}, j = 0..p; gamma is 1-periodic so x_0 and x_{p+1}
    // reuse the samples of x_p and x_1
    std::vector<Vec2> pos(p), tan(p);
    for (int i = 1; i <= p; ++i) {
        pos[i - 1] = b.gamma(lift.at(i));
        tan[i - 1] = b.dgamma(lift.at(i));
    }
    auto idx = [p](int j) { return ((j - 1) % p + p) % p; };
    std::vector<double> plus(p + 1), minus(p + 1);
    for (int j = 0; j <= p; ++j) {
        const int s = idx(j), e = idx(j + 1);
        const double inc = lift.increment(j);
        if (inc < kDiagonalGuard) {
            plus[j] = -tan[s].norm();
            minus[j] = tan[s].norm();
        } else if (1.0 - inc < kDiagonalGuard) {
            plus[j] = tan[s].norm();
            minus[j] = -tan[s].norm();
        } else {
            const Vec2 u = pos[e] - pos[s];
            const double L = u.norm();
            plus[j] = -u.dot(tan[s]) / L;
            minus[j] = u.dot(tan[e]) / L;
        }
    }
    std::vector<double> F(p);
    for (int i = 1; i <= p; ++i) F[i - 1] = minus[i - 1] + plus[i];
    return F;
}

double periodic_action(const Boundary& b, const PeriodicLift& lift) {
    double W = 0.0;
    for (int j = 1; j <= lift.p(); ++j) W += chord_length(b, lift.at(j), lift.at(j + 1));
    return W;
}

}  // namespace billiard
