#pragma once

#include "billiard/flow.hpp"
#include "billiard/geometry.hpp"
#include "billiard/sequences.hpp"
#include "billiard/spectral.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace billiard {

struct BoundarySpec {
    std::string family = "limacon";  // limacon | ellipse | circle
    int n = 2;
    double alpha = 0.0;
    double a = 1.0, b = 1.0;
    double radius = 1.0;

    Boundary build() const;
    std::string describe() const;
};

enum class KParity { Auto, Even, Odd };

// Raised by find_orbit when margin <= 0 and force is not set.
class CriterionInconclusive : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SearchRequest {
    BoundarySpec boundary;
    CriterionKind kind = CriterionKind::Main;
    int n = 2, m = 1, A = 1;
    int N = 1;
    int b = 0;  // reflection R^b S of the subgroup (main kind)
    int s = 2;
    std::optional<double> epsilon;
    KParity parity = KParity::Auto;
    std::optional<long> shift;  // overrides K (typeII) or k (typeV)
    bool force = false;
    FlowOptions flow;
};

enum class Outcome { NonBirkhoffFound, CollapsedToBirkhoff, HitBoundaryOrbit, NonConverged };
std::string to_string(Outcome o);

// Constraint system, reference and starting mode for one request.
struct SearchSetup {
    int p = 0, q = 0;
    long K = 0, k = 0;
    PeriodicLift reference;
    SymmetrySpec symmetry;
    AffineSystem system;
    Eigen::VectorXd mode;
};

struct OrbitReport {
    SearchRequest request;
    CriterionReport criterion;
    PeriodicLift reference;
    PeriodicLift final_lift;
    long K = 0, k = 0;
    double epsilon = 0.0;
    bool is_birkhoff = false;
    int minimal_period = 0;
    int winding = 0;
    SpatiotemporalGroup group;
    Intersection crossings;
    double action_reference = 0.0;
    double action_final = 0.0;
    double action_gain = 0.0;
    double residual = 0.0;
    Outcome outcome = Outcome::NonConverged;
    FlowStatus flow_status = FlowStatus::Plateau;
    std::string diagnostic;
    double flow_time = 0.0;
    long flow_steps = 0;
    double worst_action_ratio = 0.0;
    double max_constraint_residual = 0.0;
    std::vector<std::string> anomalies;
    std::vector<std::string> warnings;
};

// Validates the arithmetic and the boundary, then evaluates the criterion at the reference orbit.
CriterionReport evaluate_criterion(const SearchRequest& req, const Boundary& b);

SearchSetup prepare_search(const SearchRequest& req);

PeriodicLift initial_perturbation(CriterionKind kind, const PeriodicLift& X, int n, long K, long k, double epsilon);

OrbitReport find_orbit(const SearchRequest& req);
OrbitReport find_orbit(const SearchRequest& req, const Boundary& b);

// Classification of an arbitrary lift against the reference of a request.
void classify_into(OrbitReport& r, const Boundary& b, int n);

struct SweepEntry {
    double parameter = 0.0;
    std::optional<CriterionReport> criterion;
    std::optional<OrbitReport> orbit;
    std::string error;
};

enum class SweepParameter { S, Alpha };

// Independent runs in parallel; per-entry failures are recorded.
std::vector<SweepEntry> sweep(const SearchRequest& tmpl, SweepParameter what, const std::vector<double>& values,
                              bool run_flow = true, unsigned threads = 0);

}  // namespace billiard
