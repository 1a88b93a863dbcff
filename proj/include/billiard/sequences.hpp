#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace billiard {

// Periodic lift in X_{p,q}: coords hold x_1..x_p and x_{i+p} = x_i + q.
class PeriodicLift {
public:
    PeriodicLift() = default;
    PeriodicLift(int p, int q, std::vector<double> coords);

    int p() const { return p_; }
    int q() const { return q_; }
    const std::vector<double>& coords() const { return coords_; }
    std::vector<double>& coords() { return coords_; }

    // x_i for any integer i.
    double at(long i) const;
    double increment(long i) const { return at(i + 1) - at(i); }

    // The same sequence viewed in X_{kp,kq}.
    PeriodicLift repeated(int k) const;
    PeriodicLift shifted(double c) const;

    Eigen::VectorXd vector() const;
    static PeriodicLift from_vector(int p, int q, const Eigen::VectorXd& v);

private:
    int p_ = 0;
    int q_ = 0;
    std::vector<double> coords_;
};

// Increments in [delta, 1 - delta].
bool in_sigma_delta(const PeriodicLift& lift, double delta);
// Increments in the open interval (0, 1).
bool in_sigma(const PeriodicLift& lift);

// Unique integer l with x_i <= x_j + l < x_i + 1; differences within tol of an integer count as ties.
long order_index(const PeriodicLift& lift, long i, long j, double tol = 1e-9);
bool is_birkhoff(const PeriodicLift& lift, double tol = 1e-9);

struct Intersection {
    bool tangent = false;
    int count = 0;
};
Intersection intersection_index(const PeriodicLift& x, const PeriodicLift& y, double tol = 1e-9);

enum class SymmetryKind { RotationPreserving, RotationReversing, ReflectionPreserving, ReflectionReversing };

struct Generator {
    SymmetryKind kind;
    int g;   // exponent a of R^a, or b of R^b S
    long k;  // time shift
    long M;  // integer offset
};

struct SymmetrySpec {
    int n = 1;
    std::vector<Generator> generators;
};

// Constraint set {A x = b} on the coordinates x_1..x_p.
struct AffineSystem {
    Eigen::MatrixXd A;
    Eigen::VectorXd b;
    Eigen::MatrixXd null_basis;  // orthonormal columns spanning ker A
    Eigen::VectorXd particular;  // minimum-norm solution

    int dimension() const { return static_cast<int>(null_basis.cols()); }
    Eigen::VectorXd project(const Eigen::VectorXd& x) const;
    double residual(const Eigen::VectorXd& x) const;
};

AffineSystem make_affine_system(Eigen::MatrixXd A, Eigen::VectorXd b);
AffineSystem expand_constraints(const SymmetrySpec& spec, int p, int q);

PeriodicLift symmetric_birkhoff(int n, int m, int A);

int minimal_period(const PeriodicLift& lift, double tol = 1e-8);

struct GroupElement {
    int a = 0;               // rotation exponent
    bool reflect = false;    // R^a S when true
    std::vector<long> preserving_shifts;
    std::vector<long> reversing_shifts;
    bool preserving() const { return !preserving_shifts.empty(); }
    bool reversing() const { return !reversing_shifts.empty(); }
    std::string name(int n) const;
};

struct SpatiotemporalGroup {
    int n = 1;
    std::vector<GroupElement> elements;  // only members of H
    int rotations = 0;                   // N
    int reflections = 0;
    std::string type_label;
    // Smallest residual among rejected candidate relations; how close the test came to
    // admitting one more symmetry relation.
    double nearest_rejected = 0.0;

    int order() const { return rotations + reflections; }
    const GroupElement* find(int a, bool reflect) const;
};

// Residual of a candidate relation: distance of the defining differences from a common integer.
double relation_residual(const PeriodicLift& lift, int n, int g, bool reflect, bool reversing, long k);

SpatiotemporalGroup spatiotemporal_group(const PeriodicLift& lift, int n, double tol = 1e-8);

// Def. of geometric equality: z_i = Z_{k+i} or z_i = Z_{k-i} for some k.
bool geometrically_equal(const PeriodicLift& x, const PeriodicLift& y, double tol = 1e-8);

int gcd_int(long a, long b);

struct AubryDiagram {
    std::vector<std::pair<double, double>> vertices;
};
AubryDiagram aubry_diagram(const PeriodicLift& lift, int translate = 0);

struct OrbitFile {
    PeriodicLift lift;
    int n = 0;
    int m = 0;
};
void write_orbit(std::ostream& out, const OrbitFile& orbit);
OrbitFile read_orbit(std::istream& in);
void write_orbit_file(const std::string& path, const OrbitFile& orbit);
OrbitFile read_orbit_file(const std::string& path);

}  // namespace billiard
