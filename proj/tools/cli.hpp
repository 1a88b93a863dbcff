#pragma once

#include "billiard/finder.hpp"
#include "billiard/render.hpp"

#include "json.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace billiard::cli {

enum ExitCode { kOk = 0, kPrecondition = 2, kCriterionFails = 3, kFlowFailure = 4 };

struct RunConfig {
    SearchRequest request;
    RenderSpec render;
    std::string out_dir = ".";
    std::string name = "orbit";
    SweepParameter sweep_parameter = SweepParameter::S;
    std::vector<double> sweep_values;
};

// INI-style file: [billiard], [theorem], [flow], [render], [sweep], [output].
RunConfig load_config(const std::string& path);

nlohmann::json to_json(const CriterionReport& r);
nlohmann::json to_json(const SpatiotemporalGroup& g);
nlohmann::json to_json(const OrbitReport& r);
nlohmann::json lift_json(const PeriodicLift& l);

int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace billiard::cli
