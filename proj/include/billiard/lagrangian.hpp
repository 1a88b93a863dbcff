#pragma once

#include "billiard/geometry.hpp"

#include <vector>

namespace billiard {

class PeriodicLift;

// Distances below this from an integer count as coincident points.
inline constexpr double kDiagonalGuard = 1e-9;

struct ChordAngles {
    double theta;  // from gamma'(x) to gamma(X) - gamma(x)
    double phi;    // from gamma(X) - gamma(x) to gamma'(X)
};

struct SecondPartials {
    double d11, d12, d22;
};

double chord_length(const Boundary& b, double x, double X);
double d1_chord(const Boundary& b, double x, double X);
double d2_chord(const Boundary& b, double x, double X);
ChordAngles chord_angles(const Boundary& b, double x, double X);

// Requires a constant-speed boundary.
SecondPartials second_partials(const Boundary& b, double x, double X);

// F-(x, X) = d2 L and F+(x, X) = d1 L for x <= X <= x + 1, continuous up to the diagonal.
double force_minus(const Boundary& b, double x, double X);
double force_plus(const Boundary& b, double x, double X);

std::vector<double> gradient_field(const Boundary& b, const PeriodicLift& lift);
double periodic_action(const Boundary& b, const PeriodicLift& lift);

}  // namespace billiard
