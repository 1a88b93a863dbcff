#include "billiard/geometry.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace billiard {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}  // namespace

Boundary::Boundary(Fn gamma, Fn dgamma, Fn ddgamma, int symmetry_order, std::string family,
                   bool constant_speed, double total_length)
    : gamma_(std::move(gamma)),
      dgamma_(std::move(dgamma)),
      ddgamma_(std::move(ddgamma)),
      n_(symmetry_order),
      family_(std::move(family)),
      constant_speed_(constant_speed),
      length_(total_length) {}

double Boundary::total_length() const {
    if (length_ <= 0.0) length_ = perimeter(*this);
    return length_;
}

Boundary Boundary::scaled(double factor) const {
    if (!(factor > 0.0)) throw std::invalid_argument("scale factor must be positive");
    auto g = gamma_, d = dgamma_, dd = ddgamma_;
    return Boundary([g, factor](double x) { return Vec2(factor * g(x)); },
                    [d, factor](double x) { return Vec2(factor * d(x)); },
                    [dd, factor](double x) { return Vec2(factor * dd(x)); }, n_, family_,
                    constant_speed_, length_ > 0.0 ? factor * length_ : 0.0);
}

Boundary make_limacon(int n, double alpha) {
    if (n < 1) throw std::invalid_argument("limacon: n must be >= 1");
    if (!(std::abs(alpha) < 1.0)) throw std::invalid_argument("limacon: |alpha| must be < 1");
    const double w = kTwoPi * n;
    auto g = [n, alpha, w](double x) {
        const double r = 1.0 + alpha * std::cos(w * x);
        return Vec2(r * std::cos(kTwoPi * x), r * std::sin(kTwoPi * x));
    };
    auto dg = [alpha, w](double x) {
        const double r = 1.0 + alpha * std::cos(w * x);
        const double rp = -alpha * w * std::sin(w * x);
        const double c = std::cos(kTwoPi * x), s = std::sin(kTwoPi * x);
        return Vec2(rp * c - kTwoPi * r * s, rp * s + kTwoPi * r * c);
    };
    auto ddg = [alpha, w](double x) {
        const double r = 1.0 + alpha * std::cos(w * x);
        const double rp = -alpha * w * std::sin(w * x);
        const double rpp = -alpha * w * w * std::cos(w * x);
        const double c = std::cos(kTwoPi * x), s = std::sin(kTwoPi * x);
        const double radial = rpp - kTwoPi * kTwoPi * r;
        const double normal = 2.0 * kTwoPi * rp;
        return Vec2(radial * c - normal * s, radial * s + normal * c);
    };
    (void)n;
    return Boundary(g, dg, ddg, n, "limacon");
}

Boundary make_ellipse(double a, double b) {
    if (!(a > 0.0 && b > 0.0)) throw std::invalid_argument("ellipse: semi-axes must be positive");
    return Boundary(
        [a, b](double x) { return Vec2(a * std::cos(kTwoPi * x), b * std::sin(kTwoPi * x)); },
        [a, b](double x) {
            return Vec2(-kTwoPi * a * std::sin(kTwoPi * x), kTwoPi * b * std::cos(kTwoPi * x));
        },
        [a, b](double x) {
            const double w2 = kTwoPi * kTwoPi;
            return Vec2(-w2 * a * std::cos(kTwoPi * x), -w2 * b * std::sin(kTwoPi * x));
        },
        2, "ellipse");
}

Boundary make_circle(double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("circle: radius must be positive");
    auto b = make_ellipse(radius, radius);
    return Boundary([b](double x) { return b.gamma(x); }, [b](double x) { return b.dgamma(x); },
                    [b](double x) { return b.ddgamma(x); }, 0, "circle", true, kTwoPi * radius);
}

double limacon_convexity_threshold(int n) {
    if (n < 1) throw std::invalid_argument("limacon: n must be >= 1");
    return 1.0 / (1.0 + static_cast<double>(n) * n);
}

double limacon_det(int n, double alpha, double x) {
    const double c = std::cos(kTwoPi * n * x);
    const double nn = static_cast<double>(n) * n;
    const double a1 = c * c * (1.0 - nn) + 2.0 * nn;
    const double a2 = c * (2.0 + nn);
    return 8.0 * kPi * kPi * kPi * (a1 * alpha * alpha + a2 * alpha + 1.0);
}

double signed_det(const Boundary& b, double x) {
    const Vec2 d = b.dgamma(x), dd = b.ddgamma(x);
    return d.x() * dd.y() - d.y() * dd.x();
}

double curvature_at(const Boundary& b, double x) {
    const Vec2 d = b.dgamma(x);
    const double speed = d.norm();
    if (speed == 0.0) throw std::domain_error("curvature undefined at a singular point");
    return std::abs(signed_det(b, x)) / (speed * speed * speed);
}

double convexity_margin(const Boundary& b, int samples) {
    if (samples < 8) throw std::invalid_argument("convexity_margin: too few samples");
    const double h = 1.0 / samples;
    double best = std::numeric_limits<double>::infinity();
    int at = 0;
    for (int i = 0; i < samples; ++i) {
        const double v = signed_det(b, i * h);
        if (v < best) {
            best = v;
            at = i;
        }
    }
    auto f = [&b](double x) { return signed_det(b, x); };
    auto r = boost::math::tools::brent_find_minima(f, (at - 1) * h, (at + 1) * h, 50);
    return std::min(best, r.second);
}

double perimeter(const Boundary& b, double tol) {
    double err = 0.0;
    auto speed = [&b](double x) { return b.dgamma(x).norm(); };
    const double len = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        speed, 0.0, 1.0, 20, tol, &err);
    if (err > 1e-9 * len) throw std::runtime_error("perimeter: quadrature did not converge");
    return len;
}

namespace {

struct ArcTable {
    Boundary base;
    int knots = 4096;
    double length = 0.0;
    std::vector<double> s;  // normalized arc length at x_j = j / knots

    double speed(double x) const { return base.dgamma(x).norm(); }

    double integral(double a, double b) const {
        auto f = [this](double x) { return speed(x); };
        return boost::math::quadrature::gauss<double, 10>::integrate(f, a, b) / length;
    }

    // Normalized arc length on [0, 1] for x in [0, 1].
    double forward(double x) const {
        const int j = std::clamp(static_cast<int>(std::floor(x * knots)), 0, knots - 1);
        const double xj = static_cast<double>(j) / knots;
        return s[j] + integral(xj, x);
    }

    // Inverse on one period.
    double inverse(double t) const {
        auto it = std::upper_bound(s.begin(), s.end(), t);
        int j = static_cast<int>(it - s.begin()) - 1;
        j = std::clamp(j, 0, knots - 1);
        const double h = 1.0 / knots;
        const double x0 = j * h;
        // monotone cubic Hermite guess using exact slopes
        const double d0 = speed(x0) / length * h;
        const double d1 = speed(x0 + h) / length * h;
        const double span = s[j + 1] - s[j];
        double u = span > 0.0 ? (t - s[j]) / span : 0.0;
        for (int k = 0; k < 3; ++k) {
            const double u2 = u * u, u3 = u2 * u;
            const double val = (2 * u3 - 3 * u2 + 1) * s[j] + (u3 - 2 * u2 + u) * d0 +
                               (-2 * u3 + 3 * u2) * s[j + 1] + (u3 - u2) * d1 - t;
            const double der = (6 * u2 - 6 * u) * s[j] + (3 * u2 - 4 * u + 1) * d0 +
                               (-6 * u2 + 6 * u) * s[j + 1] + (3 * u2 - 2 * u) * d1;
            if (der <= 0.0) break;
            u = std::clamp(u - val / der, 0.0, 1.0);
        }
        double x = x0 + u * h;
        for (int k = 0; k < 4; ++k) {
            const double f = s[j] + integral(x0, x) - t;
            const double step = f * length / speed(x);
            x = std::clamp(x - step, x0, x0 + h);
            if (std::abs(step) < 1e-12) break;
        }
        return x;
    }

    double invert(double t) const {
        const double fl = std::floor(t);
        return fl + inverse(t - fl);
    }
};

}  // namespace

Boundary reparametrize_constant_speed(const Boundary& b, double tol) {
    if (b.constant_speed()) return b;
    auto table = std::make_shared<ArcTable>(ArcTable{b, 4096, 0.0, {}});
    table->length = b.total_length();
    table->s.assign(table->knots + 1, 0.0);
    double acc = 0.0;
    double worst = 0.0;
    const double h = 1.0 / table->knots;
    auto speed = [&b](double x) { return b.dgamma(x).norm(); };
    for (int j = 0; j < table->knots; ++j) {
        double err = 0.0;
        acc += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
            speed, j * h, (j + 1) * h, 0, 1e-13, &err);
        worst = std::max(worst, err);
        table->s[j + 1] = acc;
    }
    if (worst / table->length > tol) {
        throw std::runtime_error("reparametrization: quadrature error " +
                                 std::to_string(worst / table->length) + " exceeds tolerance");
    }
    table->length = acc;
    for (auto& v : table->s) v /= acc;
    table->s.back() = 1.0;

    for (int i = 0; i < 97; ++i) {
        const double t = (i + 0.37) / 97.0;
        const double x = table->invert(t);
        if (std::abs(table->forward(x) - t) > tol) {
            throw std::runtime_error("reparametrization: inversion residual exceeds tolerance");
        }
    }

    const double c = table->length;
    auto g = [table](double t) { return table->base.gamma(table->invert(t)); };
    auto dg = [table, c](double t) {
        const double x = table->invert(t);
        const Vec2 d = table->base.dgamma(x);
        return Vec2(d * (c / d.norm()));
    };
    auto ddg = [table, c](double t) {
        const double x = table->invert(t);
        const Vec2 d = table->base.dgamma(x);
        const Vec2 dd = table->base.ddgamma(x);
        const double sp = d.norm();
        const double xp = c / sp;
        const double xpp = -c * c * d.dot(dd) / (sp * sp * sp * sp);
        return Vec2(dd * (xp * xp) + d * xpp);
    };
    return Boundary(g, dg, ddg, b.symmetry_order(), b.family(), true, c);
}

Vec2 rotate(const Vec2& v, double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return Vec2(c * v.x() - s * v.y(), s * v.x() + c * v.y());
}

Vec2 group_act(const Vec2& z, int n, int a, bool reflect) {
    Vec2 w = reflect ? Vec2(z.x(), -z.y()) : z;
    return rotate(w, kTwoPi * a / n);
}

double equivariance_defect(const Boundary& b, int samples) {
    const int n = b.symmetry_order() == 0 ? 12 : b.symmetry_order();
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double x = (i + 0.123) / samples;
        worst = std::max(worst, (group_act(b.gamma(x), n, 1, false) - b.gamma(x + 1.0 / n)).norm());
        worst = std::max(worst, (group_act(b.gamma(x), n, 0, true) - b.gamma(-x)).norm());
    }
    return worst;
}

}  // namespace billiard
