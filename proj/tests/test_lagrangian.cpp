#include "billiard/lagrangian.hpp"
#include "billiard/sequences.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace billiard;

namespace {
constexpr double kPi = std::numbers::pi;

double fd_d1(const Boundary& b, double x, double X, double h = 1e-6) {
    return (chord_length(b, x + h, X) - chord_length(b, x - h, X)) / (2 * h);
}
double fd_d2(const Boundary& b, double x, double X, double h = 1e-6) {
    return (chord_length(b, x, X + h) - chord_length(b, x, X - h)) / (2 * h);
}

PeriodicLift random_lift(std::mt19937& rng, int p, int q, double jitter) {
    std::uniform_real_distribution<double> u(-jitter, jitter);
    std::vector<double> c(p);
    for (int i = 0; i < p; ++i) c[i] = (i + 1) * static_cast<double>(q) / p + u(rng);
    return PeriodicLift(p, q, c);
}
}  // namespace

TEST(ChordLength, CircleChords) {
    auto c = make_circle();
    EXPECT_NEAR(chord_length(c, 0, 0.5), 2.0, 1e-15);
    for (int n = 3; n <= 9; ++n) {
        for (int m = 1; m < n; ++m) {
            EXPECT_NEAR(chord_length(c, 0.1, 0.1 + double(m) / n), 2 * std::sin(m * kPi / n), 1e-14);
        }
    }
    EXPECT_NEAR(chord_length(make_ellipse(2, 1), 0.25, 0.75), 2.0, 1e-15);
}

TEST(ChordLength, Symmetries) {
    auto b = make_limacon(5, 0.035);
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < 100; ++i) {
        const double x = u(rng), X = u(rng);
        const double L = chord_length(b, x, X);
        EXPECT_NEAR(L, chord_length(b, X, x), 1e-15);
        EXPECT_NEAR(L, chord_length(b, x + 0.2, X + 0.2), 1e-13);
        EXPECT_NEAR(L, chord_length(b, -X, -x), 1e-13);
    }
}

TEST(FirstPartials, CircleValues) {
    auto c = make_circle();
    EXPECT_NEAR(d1_chord(c, 0, 0.5), 0.0, 1e-13);
    EXPECT_NEAR(d1_chord(c, 0, 0.25), -kPi * std::sqrt(2.0), 1e-13);
    EXPECT_NEAR(fd_d1(c, 0, 0.25), -kPi * std::sqrt(2.0), 1e-7);
}

TEST(FirstPartials, AgreeWithFiniteDifferences) {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(0, 1), gap(0.05, 0.95);
    for (const auto& b : {make_limacon(4, 0.05), make_ellipse(2, 1), make_limacon(2, 0.19)}) {
        for (int i = 0; i < 100; ++i) {
            const double x = u(rng), X = x + gap(rng);
            EXPECT_NEAR(d1_chord(b, x, X), fd_d1(b, x, X), 1e-6);
            EXPECT_NEAR(d2_chord(b, x, X), fd_d2(b, x, X), 1e-6);
            EXPECT_NEAR(d1_chord(b, x, X), d2_chord(b, X, x), 1e-12);
        }
    }
}

TEST(FirstPartials, CoincidentPointsThrow) {
    auto b = make_circle();
    EXPECT_THROW(d1_chord(b, 0.3, 0.3), std::domain_error);
    EXPECT_THROW(d2_chord(b, 0.3, 1.3), std::domain_error);
}

TEST(ChordAngles, InscribedAngleOnCircle) {
    auto c = make_circle();
    for (double d : {0.1, 0.25, 0.5, 0.8}) {
        const auto a = chord_angles(c, 0.2, 0.2 + d);
        EXPECT_NEAR(a.theta, kPi * d, 1e-13);
        EXPECT_NEAR(a.phi, kPi * d, 1e-13);
    }
}

TEST(Forces, BoundaryValuesAndContinuity) {
    auto b = make_limacon(3, 0.05);
    for (double x : {0.0, 0.17, 0.61}) {
        const double sp = b.dgamma(x).norm();
        EXPECT_NEAR(force_minus(b, x, x), sp, 1e-12);
        EXPECT_NEAR(force_plus(b, x, x + 1), sp, 1e-12);
        EXPECT_NEAR(force_minus(b, x, x + 1), -sp, 1e-12);
        EXPECT_NEAR(force_plus(b, x, x), -sp, 1e-12);
        // approaching the diagonal from the interior
        EXPECT_NEAR(force_minus(b, x, x + 1e-6), sp, 1e-4 * sp);
        EXPECT_NEAR(force_plus(b, x, x + 1 - 1e-6), sp, 1e-4 * sp);
    }
    EXPECT_THROW(force_minus(b, 0.5, 0.4), std::invalid_argument);
    EXPECT_THROW(force_plus(b, 0.5, 1.6), std::invalid_argument);
}

TEST(Forces, CirclePolygonValue) {
    auto c = make_circle();
    for (int n = 2; n <= 7; ++n) {
        for (int m = 1; m < n; ++m) {
            EXPECT_NEAR(force_minus(c, 0.3, 0.3 + double(m) / n), 2 * kPi * std::cos(m * kPi / n), 1e-12);
        }
    }
}

TEST(Forces, MinusIncreasingInFirstArgument) {
    auto b = make_limacon(4, 0.05);
    const double X = 0.7;
    double prev = -1e300;
    for (int i = 0; i <= 200; ++i) {
        const double x = X - 1 + i / 200.0;
        const double f = force_minus(b, x, X);
        EXPECT_GT(f, prev);
        prev = f;
    }
}

TEST(SecondPartials, RequireConstantSpeed) {
    EXPECT_THROW(second_partials(make_limacon(4, 0.05), 0.1, 0.4), std::invalid_argument);
}

TEST(SecondPartials, CircleDiameter) {
    auto s = second_partials(make_circle(), 0.0, 0.5);
    EXPECT_NEAR(s.d12, 2 * kPi * kPi, 1e-12);
}

TEST(SecondPartials, AgreeWithFiniteDifferences) {
    const Boundary curves[] = {make_circle(), reparametrize_constant_speed(make_limacon(4, 0.05)),
                               reparametrize_constant_speed(make_ellipse(2, 1))};
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> u(0, 1), gap(0.08, 0.92);
    const double h = 1e-5;
    for (const auto& b : curves) {
        for (int i = 0; i < 30; ++i) {
            const double x = u(rng), X = x + gap(rng);
            const auto s = second_partials(b, x, X);
            const double f11 = (d1_chord(b, x + h, X) - d1_chord(b, x - h, X)) / (2 * h);
            const double f12 = (d1_chord(b, x, X + h) - d1_chord(b, x, X - h)) / (2 * h);
            const double f22 = (d2_chord(b, x, X + h) - d2_chord(b, x, X - h)) / (2 * h);
            const double scale = std::max({1.0, std::abs(f11), std::abs(f12), std::abs(f22)});
            EXPECT_NEAR(s.d11, f11, 1e-5 * scale);
            EXPECT_NEAR(s.d12, f12, 1e-5 * scale);
            EXPECT_NEAR(s.d22, f22, 1e-5 * scale);
            EXPECT_GT(s.d12, 0.0);
        }
    }
}

TEST(GradientField, VanishesOnSymmetricBirkhoff) {
    for (int A : {0, 1}) {
        auto X = symmetric_birkhoff(4, 1, A);
        for (double F : gradient_field(make_limacon(4, 0.05), X)) EXPECT_NEAR(F, 0.0, 1e-12);
    }
    auto X = symmetric_birkhoff(5, 2, 1);
    for (double F : gradient_field(make_limacon(5, 0.035), X)) EXPECT_NEAR(F, 0.0, 1e-12);
}

TEST(GradientField, VanishesOnCircleLinearLifts) {
    PeriodicLift x(4, 1, {0.137, 0.387, 0.637, 0.887});
    for (double F : gradient_field(make_circle(), x)) EXPECT_NEAR(F, 0.0, 1e-12);
}

TEST(GradientField, MatchesFiniteDifferenceOfAction) {
    std::mt19937 rng(21);
    auto b = make_limacon(4, 0.05);
    for (int trial = 0; trial < 10; ++trial) {
        auto x = random_lift(rng, 12, 3, 0.1);
        ASSERT_TRUE(in_sigma_delta(x, 0.05));
        const auto F = gradient_field(b, x);
        const double h = 1e-6;
        for (int i = 0; i < 12; ++i) {
            auto xp = x, xm = x;
            xp.coords()[i] += h;
            xm.coords()[i] -= h;
            const double fd = (periodic_action(b, xp) - periodic_action(b, xm)) / (2 * h);
            EXPECT_NEAR(F[i], fd, 1e-6 * std::max(1.0, std::abs(fd)));
        }
    }
}

TEST(GradientField, RejectsLiftOutsideSigma) {
    PeriodicLift bad(3, 1, {0.1, 0.05, 0.7});
    try {
        gradient_field(make_circle(), bad);
        FAIL() << "expected domain_error";
    } catch (const std::domain_error& e) {
        EXPECT_NE(std::string(e.what()).find("index 1"), std::string::npos) << e.what();
    }
}

TEST(PeriodicAction, Polygons) {
    auto c = make_circle();
    EXPECT_NEAR(periodic_action(c, PeriodicLift(4, 1, {0.25, 0.5, 0.75, 1.0})), 4 * std::sqrt(2.0), 1e-14);
    EXPECT_NEAR(periodic_action(c, PeriodicLift(2, 1, {0.1, 0.6})), 4.0, 1e-14);

    auto b = make_limacon(4, 0.05);
    const double L = (b.gamma(1.0 / 8) - b.gamma(3.0 / 8)).norm();
    EXPECT_NEAR(periodic_action(b, symmetric_birkhoff(4, 1, 1)), 4 * L, 1e-13);
}
