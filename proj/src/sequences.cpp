#include "billiard/sequences.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace billiard {

namespace {

long floor_div(long a, long b) {
    long d = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --d;
    return d;
}

long pos_mod(long a, long b) { return a - b * floor_div(a, b); }

double integer_distance(double v) { return std::abs(v - std::round(v)); }

}  // namespace

int gcd_int(long a, long b) { return static_cast<int>(std::gcd(a, b)); }

PeriodicLift::PeriodicLift(int p, int q, std::vector<double> coords)
    : p_(p), q_(q), coords_(std::move(coords)) {
    if (p < 1) throw std::invalid_argument("lift period must be positive");
    if (static_cast<int>(coords_.size()) != p) {
        throw std::invalid_argument("lift needs exactly p coordinates");
    }
}

double PeriodicLift::at(long i) const {
    const long r = pos_mod(i - 1, p_);
    const long t = floor_div(i - 1, p_);
    return coords_[r] + static_cast<double>(q_) * static_cast<double>(t);
}

PeriodicLift PeriodicLift::repeated(int k) const {
    if (k < 1) throw std::invalid_argument("repeat count must be positive");
    std::vector<double> c(static_cast<size_t>(p_) * k);
    for (int i = 1; i <= p_ * k; ++i) c[i - 1] = at(i);
    return PeriodicLift(p_ * k, q_ * k, std::move(c));
}

PeriodicLift PeriodicLift::shifted(double c) const {
    auto v = coords_;
    for (auto& x : v) x += c;
    return PeriodicLift(p_, q_, std::move(v));
}

Eigen::VectorXd PeriodicLift::vector() const {
    return Eigen::Map<const Eigen::VectorXd>(coords_.data(), p_);
}

PeriodicLift PeriodicLift::from_vector(int p, int q, const Eigen::VectorXd& v) {
    return PeriodicLift(p, q, std::vector<double>(v.data(), v.data() + v.size()));
}

bool in_sigma_delta(const PeriodicLift& lift, double delta) {
    for (int i = 1; i <= lift.p(); ++i) {
        const double d = lift.increment(i);
        if (d < delta || d > 1.0 - delta) return false;
    }
    return true;
}

bool in_sigma(const PeriodicLift& lift) {
    for (int i = 1; i <= lift.p(); ++i) {
        const double d = lift.increment(i);
        if (!(d > 0.0 && d < 1.0)) return false;
    }
    return true;
}

long order_index(const PeriodicLift& lift, long i, long j, double tol) {
    return static_cast<long>(std::ceil(lift.at(i) - lift.at(j) - tol));
}

bool is_birkhoff(const PeriodicLift& lift, double tol) {
    const int p = lift.p();
    std::vector<long> base(static_cast<size_t>(p) * p);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) base[i * p + j] = order_index(lift, i, j, tol);
    for (int m = 1; m < p; ++m)
        for (int i = 0; i < p; ++i)
            for (int j = 0; j < p; ++j)
                if (order_index(lift, i + m, j + m, tol) != base[i * p + j]) return false;
    return true;
}

Intersection intersection_index(const PeriodicLift& x, const PeriodicLift& y, double tol) {
    if (x.p() != y.p() || x.q() != y.q()) {
        throw std::invalid_argument("intersection_index: lifts must share (p, q)");
    }
    const int p = x.p();
    std::vector<double> d(p);
    for (int i = 1; i <= p; ++i) d[i - 1] = x.at(i) - y.at(i);
    auto dd = [&](int i) { return d[pos_mod(i, p)]; };

    std::vector<int> sign;
    for (int i = 0; i < p; ++i) {
        if (std::abs(d[i]) <= tol) {
            const double a = dd(i - 1), b = dd(i + 1);
            if (!(std::abs(a) > tol && std::abs(b) > tol && a * b < 0.0)) return {true, 0};
            continue;
        }
        sign.push_back(d[i] > 0.0 ? 1 : -1);
    }
    if (sign.empty()) return {true, 0};
    int changes = 0;
    for (size_t i = 0; i < sign.size(); ++i) {
        if (sign[i] != sign[(i + 1) % sign.size()]) ++changes;
    }
    return {false, changes};
}

Eigen::VectorXd AffineSystem::project(const Eigen::VectorXd& x) const {
    if (A.rows() == 0) return x;
    const Eigen::VectorXd r = x - particular;
    return particular + null_basis * (null_basis.transpose() * r);
}

double AffineSystem::residual(const Eigen::VectorXd& x) const {
    if (A.rows() == 0) return 0.0;
    return (A * x - b).cwiseAbs().maxCoeff();
}

AffineSystem make_affine_system(Eigen::MatrixXd A, Eigen::VectorXd b) {
    AffineSystem sys;
    const int p = static_cast<int>(A.cols());
    sys.A = std::move(A);
    sys.b = std::move(b);
    if (sys.A.rows() == 0) {
        sys.null_basis = Eigen::MatrixXd::Identity(p, p);
        sys.particular = Eigen::VectorXd::Zero(p);
        return sys;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(sys.A, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cutoff = 1e-10 * std::max(1.0, sv(0));
    int rank = 0;
    while (rank < sv.size() && sv(rank) > cutoff) ++rank;
    svd.setThreshold(cutoff / std::max(1.0, sv(0)));
    sys.particular = svd.solve(sys.b);
    if ((sys.A * sys.particular - sys.b).cwiseAbs().maxCoeff() > 1e-9) {
        throw std::invalid_argument("symmetry constraints are infeasible for this (p, q)");
    }
    sys.null_basis = svd.matrixV().rightCols(p - rank);
    // snap the particular solution onto the affine set
    sys.particular = sys.project(sys.particular);
    return sys;
}

AffineSystem expand_constraints(const SymmetrySpec& spec, int p, int q) {
    if (spec.n < 1) throw std::invalid_argument("symmetry spec needs n >= 1");
    std::vector<Eigen::VectorXd> rows;
    std::vector<double> rhs;
    for (const auto& g : spec.generators) {
        const double shift = static_cast<double>(g.g) / spec.n + static_cast<double>(g.M);
        for (long i = 1; i <= 2L * p; ++i) {
            Eigen::VectorXd row = Eigen::VectorXd::Zero(p);
            double r = 0.0;
            auto term = [&](long j, double c) {
                row(pos_mod(j - 1, p)) += c;
                r -= c * q * static_cast<double>(floor_div(j - 1, p));
            };
            switch (g.kind) {
                case SymmetryKind::RotationPreserving:
                    term(g.k + i, 1.0), term(i, -1.0), r += shift;
                    break;
                case SymmetryKind::RotationReversing:
                    term(g.k - i, 1.0), term(i, -1.0), r += shift - static_cast<double>(i);
                    break;
                case SymmetryKind::ReflectionPreserving:
                    term(i, 1.0), term(g.k + i, 1.0), r += shift + static_cast<double>(i);
                    break;
                case SymmetryKind::ReflectionReversing:
                    term(i, 1.0), term(g.k - i, 1.0), r += shift;
                    break;
            }
            if (row.cwiseAbs().maxCoeff() == 0.0) {
                if (std::abs(r) > 1e-12) {
                    throw std::invalid_argument("symmetry constraints are infeasible for this (p, q)");
                }
                continue;
            }
            rows.push_back(row);
            rhs.push_back(r);
        }
    }
    Eigen::MatrixXd A(rows.size(), p);
    Eigen::VectorXd b(rows.size());
    for (size_t i = 0; i < rows.size(); ++i) {
        A.row(i) = rows[i].transpose();
        b(i) = rhs[i];
    }
    return make_affine_system(std::move(A), std::move(b));
}

PeriodicLift symmetric_birkhoff(int n, int m, int A) {
    if (n < 2 || m < 1 || m >= n) throw std::invalid_argument("symmetric_birkhoff: need 1 <= m < n");
    if (gcd_int(m, n) != 1) throw std::invalid_argument("symmetric_birkhoff: gcd(m, n) must be 1");
    std::vector<double> c(n);
    for (int i = 1; i <= n; ++i) c[i - 1] = static_cast<double>(A) / (2.0 * n) + static_cast<double>(m) * i / n;
    return PeriodicLift(n, m, std::move(c));
}

int minimal_period(const PeriodicLift& lift, double tol) {
    const int p = lift.p();
    for (int d = 1; d < p; ++d) {
        if (p % d != 0) continue;
        const double first = lift.at(1 + d) - lift.at(1);
        const double target = std::round(first);
        bool ok = true;
        for (int i = 1; i <= p && ok; ++i) {
            const double delta = lift.at(i + d) - lift.at(i);
            if (std::abs(delta - target) > tol * std::max(1.0, std::abs(target))) ok = false;
        }
        if (ok) return d;
    }
    return p;
}

double relation_residual(const PeriodicLift& lift, int n, int g, bool reflect, bool reversing, long k) {
    const int p = lift.p();
    const double shift = static_cast<double>(g) / n;
    auto value = [&](long i) {
        const double di = static_cast<double>(i);
        if (!reflect && !reversing) return lift.at(k + i) - lift.at(i) - shift;
        if (!reflect && reversing) return lift.at(k - i) - lift.at(i) + di - shift;
        if (reflect && !reversing) return lift.at(i) + lift.at(k + i) - di - shift;
        return lift.at(i) + lift.at(k - i) - shift;
    };
    const double M = std::round(value(1));
    double worst = 0.0;
    for (long i = 1; i <= 2L * p; ++i) worst = std::max(worst, std::abs(value(i) - M));
    return worst;
}

std::string GroupElement::name(int n) const {
    std::string s;
    const int e = ((a % n) + n) % n;
    if (e == 0) s = reflect ? "" : "Id";
    else if (e == 1) s = "R";
    else s = "R^" + std::to_string(e);
    if (reflect) s += "S";
    return s;
}

const GroupElement* SpatiotemporalGroup::find(int a, bool reflect) const {
    for (const auto& e : elements) {
        if (e.reflect == reflect && ((e.a - a) % n + n) % n == 0) return &e;
    }
    return nullptr;
}

SpatiotemporalGroup spatiotemporal_group(const PeriodicLift& lift, int n, double tol) {
    if (n < 1) throw std::invalid_argument("spatiotemporal_group: n must be >= 1");
    SpatiotemporalGroup H;
    H.n = n;
    H.nearest_rejected = std::numeric_limits<double>::infinity();
    const int p = lift.p();
    for (int reflect = 0; reflect < 2; ++reflect) {
        for (int a = 0; a < n; ++a) {
            GroupElement e;
            e.a = a;
            e.reflect = reflect != 0;
            for (long k = 0; k < p; ++k) {
                const double rp = relation_residual(lift, n, a, e.reflect, false, k);
                const double rr = relation_residual(lift, n, a, e.reflect, true, k);
                if (rp < tol) e.preserving_shifts.push_back(k);
                else H.nearest_rejected = std::min(H.nearest_rejected, rp);
                if (rr < tol) e.reversing_shifts.push_back(k);
                else H.nearest_rejected = std::min(H.nearest_rejected, rr);
            }
            if (e.preserving() || e.reversing()) {
                (e.reflect ? H.reflections : H.rotations)++;
                H.elements.push_back(std::move(e));
            }
        }
    }

    if (is_birkhoff(lift) && H.order() == 2 * n) {
        H.type_label = "Birkhoff-symmetric";
    } else if (H.reflections == 0) {
        H.type_label = "none";
    } else if (H.rotations >= 3) {
        H.type_label = "dihedral";
    } else if (H.rotations == 2) {
        const GroupElement* rho = nullptr;
        for (const auto& e : H.elements)
            if (!e.reflect && e.a != 0) rho = &e;
        H.type_label = rho && rho->reversing() ? "II" : "I";
    } else {
        const GroupElement* sigma = nullptr;
        for (const auto& e : H.elements)
            if (e.reflect) sigma = &e;
        if (sigma->preserving() && sigma->reversing()) H.type_label = "V";
        else if (sigma->reversing()) H.type_label = "III";
        else H.type_label = "IV";
    }
    return H;
}

bool geometrically_equal(const PeriodicLift& x, const PeriodicLift& y, double tol) {
    const int P = std::lcm(x.p(), y.p());
    const PeriodicLift a = x.repeated(P / x.p());
    const PeriodicLift b = y.repeated(P / y.p());
    for (int dir = 0; dir < 2; ++dir) {
        for (long k = 0; k < P; ++k) {
            bool same = true;
            for (long i = 1; i <= P && same; ++i) {
                const double d = a.at(i) - (dir == 0 ? b.at(k + i) : b.at(k - i));
                if (integer_distance(d) > tol) same = false;
            }
            if (same) return true;
        }
    }
    return false;
}

AubryDiagram aubry_diagram(const PeriodicLift& lift, int translate) {
    AubryDiagram d;
    for (int i = 1; i <= lift.p() + 1; ++i) {
        d.vertices.emplace_back(static_cast<double>(i), lift.at(i) + translate);
    }
    return d;
}

void write_orbit(std::ostream& out, const OrbitFile& orbit) {
    const auto& l = orbit.lift;
    out << l.p() << ' ' << l.q() << ' ' << orbit.n << ' ' << orbit.m << '\n';
    out << std::setprecision(17);
    for (double x : l.coords()) out << x << '\n';
}

OrbitFile read_orbit(std::istream& in) {
    OrbitFile f;
    int p = 0, q = 0;
    if (!(in >> p >> q >> f.n >> f.m)) throw std::runtime_error("orbit file: bad header");
    if (p < 1) throw std::runtime_error("orbit file: period must be positive");
    std::vector<double> c(p);
    for (int i = 0; i < p; ++i) {
        if (!(in >> c[i])) throw std::runtime_error("orbit file: expected " + std::to_string(p) + " coordinates");
    }
    f.lift = PeriodicLift(p, q, std::move(c));
    return f;
}

void write_orbit_file(const std::string& path, const OrbitFile& orbit) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    write_orbit(out, orbit);
}

OrbitFile read_orbit_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    return read_orbit(in);
}

}  // namespace billiard
