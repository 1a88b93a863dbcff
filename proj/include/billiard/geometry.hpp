#pragma once

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <string>

namespace billiard {

using Vec2 = Eigen::Vector2d;

struct CurvePoint {
    Vec2 position;
    Vec2 tangent;
    Vec2 second;
};

// Closed curve parametrized on R with period 1, counterclockwise.
// Symmetry order n means R(gamma(x)) = gamma(x + 1/n) and S(gamma(x)) = gamma(-x),
// with R the rotation by 2 pi / n and S the reflection in the horizontal axis.
class Boundary {
public:
    using Fn = std::function<Vec2(double)>;

    Boundary(Fn gamma, Fn dgamma, Fn ddgamma, int symmetry_order, std::string family,
             bool constant_speed = false, double total_length = 0.0);

    Vec2 gamma(double x) const { return gamma_(x); }
    Vec2 dgamma(double x) const { return dgamma_(x); }
    Vec2 ddgamma(double x) const { return ddgamma_(x); }
    CurvePoint point(double x) const { return {gamma_(x), dgamma_(x), ddgamma_(x)}; }

    int symmetry_order() const { return n_; }
    bool constant_speed() const { return constant_speed_; }
    // Perimeter; computed lazily for boundaries built without it.
    double total_length() const;
    const std::string& family() const { return family_; }

    Boundary scaled(double factor) const;

private:
    Fn gamma_, dgamma_, ddgamma_;
    int n_;
    std::string family_;
    bool constant_speed_;
    mutable double length_;
};

// r(x) = 1 + alpha cos(2 pi n x) in polar form.
Boundary make_limacon(int n, double alpha);
Boundary make_ellipse(double a, double b);
Boundary make_circle(double radius = 1.0);

double limacon_convexity_threshold(int n);

// det(gamma', gamma'') in closed form for the limacon.
double limacon_det(int n, double alpha, double x);

double curvature_at(const Boundary& b, double x);
double signed_det(const Boundary& b, double x);

// Minimum of det(gamma', gamma'') over a period. Positive means strictly convex.
double convexity_margin(const Boundary& b, int samples = 4096);

// Constant-speed reparametrization x~ = c^-1 int_0^x |gamma'|.
Boundary reparametrize_constant_speed(const Boundary& b, double tol = 1e-8);

// Arc length of gamma over [0, 1] by adaptive Gauss-Kronrod.
double perimeter(const Boundary& b, double tol = 1e-13);

// Largest deviation from D_n-equivariance on a sample grid.
double equivariance_defect(const Boundary& b, int samples = 64);

Vec2 rotate(const Vec2& v, double angle);
// R^a S^e applied to a point, R = rotation by 2 pi / n.
Vec2 group_act(const Vec2& z, int n, int a, bool reflect);

}  // namespace billiard
