#include "cli.hpp"

#include "billiard/lagrangian.hpp"

#include "CLI11.hpp"

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace billiard::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::shared_ptr<spdlog::logger> logger() {
    auto l = spdlog::get("billiard");
    if (!l) {
        l = spdlog::stderr_logger_mt("billiard");
        l->set_pattern("[%l] %v");
    }
    const char* env = std::getenv("BILLIARD_LOG");
    l->set_level(env ? spdlog::level::from_str(env) : spdlog::level::warn);
    return l;
}

KParity parse_parity(const std::string& s) {
    if (s == "auto") return KParity::Auto;
    if (s == "even") return KParity::Even;
    if (s == "odd") return KParity::Odd;
    throw std::invalid_argument("parity must be auto, even or odd");
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<std::string> parts;
    boost::split(parts, s, boost::is_any_of(", "), boost::token_compress_on);
    std::vector<double> out;
    for (auto& p : parts) {
        if (p.empty()) continue;
        out.push_back(std::stod(p));
    }
    return out;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << text;
}

}  // namespace

RunConfig load_config(const std::string& path) {
    boost::property_tree::ptree pt;
    try {
        boost::property_tree::read_ini(path, pt);
    } catch (const std::exception& e) {
        throw std::invalid_argument("cannot read config: " + std::string(e.what()));
    }
    RunConfig c;
    auto& bs = c.request.boundary;
    bs.family = pt.get<std::string>("billiard.family", "limacon");
    bs.n = pt.get<int>("billiard.n", 2);
    bs.alpha = pt.get<double>("billiard.alpha", 0.0);
    bs.a = pt.get<double>("billiard.a", 1.0);
    bs.b = pt.get<double>("billiard.b", 1.0);
    bs.radius = pt.get<double>("billiard.radius", 1.0);

    auto& r = c.request;
    const int default_n = bs.family == "limacon" ? bs.n : 2;
    r.kind = criterion_kind_from_string(pt.get<std::string>("theorem.kind", "main"));
    r.n = pt.get<int>("theorem.n", default_n);
    r.m = pt.get<int>("theorem.m", 1);
    r.A = pt.get<int>("theorem.A", 1);
    r.N = pt.get<int>("theorem.N", r.n);
    r.b = pt.get<int>("theorem.b", 0);
    r.s = pt.get<int>("theorem.s", 2);
    r.parity = parse_parity(pt.get<std::string>("theorem.parity", "auto"));
    if (auto v = pt.get_optional<long>("theorem.shift")) r.shift = *v;

    if (auto v = pt.get_optional<double>("flow.epsilon")) r.epsilon = *v;
    r.flow.stationarity_tol = pt.get<double>("flow.tol_stationary", r.flow.stationarity_tol);
    r.flow.max_time = pt.get<double>("flow.max_time", r.flow.max_time);
    r.flow.atol = pt.get<double>("flow.atol", r.flow.atol);
    r.flow.sigma_delta_guard = pt.get<double>("flow.sigma_delta_guard", r.flow.sigma_delta_guard);
    r.flow.record_every = pt.get<int>("flow.record_every", r.flow.record_every);
    r.force = pt.get<bool>("flow.force", false);

    const auto mode = pt.get<std::string>("render.mode", "orbit");
    if (mode == "orbit") c.render.mode = RenderMode::OrbitFigure;
    else if (mode == "aubry") c.render.mode = RenderMode::AubryDiagram;
    else throw std::invalid_argument("render.mode must be orbit or aubry");
    c.render.width = pt.get<int>("render.width", c.render.width);
    c.render.height = pt.get<int>("render.height", c.render.height);
    c.render.overlay_birkhoff = pt.get<bool>("render.overlay_birkhoff", false);
    c.render.translates = pt.get<int>("render.translates", 0);
    c.render.label_points = pt.get<bool>("render.labels", true);

    const auto param = pt.get<std::string>("sweep.parameter", "s");
    if (param == "s") c.sweep_parameter = SweepParameter::S;
    else if (param == "alpha") c.sweep_parameter = SweepParameter::Alpha;
    else throw std::invalid_argument("sweep.parameter must be s or alpha");
    c.sweep_values = parse_list(pt.get<std::string>("sweep.values", ""));

    c.out_dir = pt.get<std::string>("output.dir", ".");
    c.name = pt.get<std::string>("output.name", "orbit");
    return c;
}

json lift_json(const PeriodicLift& l) { return {{"p", l.p()}, {"q", l.q()}, {"coords", l.coords()}}; }

json to_json(const CriterionReport& r) {
    return {{"kind", to_string(r.kind)},
            {"n", r.n},
            {"m", r.m},
            {"N", r.N},
            {"s", r.s},
            {"p", r.p},
            {"q", r.q},
            {"kappa", r.kappa},
            {"L", r.L},
            {"lhs", r.lhs},
            {"rhs", r.rhs},
            {"margin", r.margin},
            {"predicted_crossings", r.predicted_crossings},
            {"predicted_min_period", r.predicted_min_period},
            {"verdict", r.verdict()}};
}

json to_json(const SpatiotemporalGroup& g) {
    json elems = json::array();
    for (const auto& e : g.elements) {
        elems.push_back({{"element", e.name(g.n)},
                         {"preserving_shifts", e.preserving_shifts},
                         {"reversing_shifts", e.reversing_shifts}});
    }
    return {{"n", g.n},
            {"order", g.order()},
            {"rotations", g.rotations},
            {"reflections", g.reflections},
            {"type_label", g.type_label},
            {"nearest_rejected_residual", std::isfinite(g.nearest_rejected) ? json(g.nearest_rejected) : json()},
            {"elements", elems}};
}

json to_json(const OrbitReport& r) {
    const auto& q = r.request;
    return {{"billiard", q.boundary.describe()},
            {"request",
             {{"kind", to_string(q.kind)}, {"n", q.n}, {"m", q.m}, {"A", q.A}, {"N", q.N}, {"b", q.b}, {"s", q.s}}},
            {"criterion", to_json(r.criterion)},
            {"epsilon", r.epsilon},
            {"K", r.K},
            {"k", r.k},
            {"outcome", to_string(r.outcome)},
            {"flow",
             {{"status", to_string(r.flow_status)},
              {"time", r.flow_time},
              {"steps", r.flow_steps},
              {"worst_action_ratio", r.worst_action_ratio},
              {"max_constraint_residual", r.max_constraint_residual},
              {"diagnostic", r.diagnostic}}},
            {"is_birkhoff", r.is_birkhoff},
            {"minimal_period", r.minimal_period},
            {"winding", r.winding},
            {"group", to_json(r.group)},
            {"crossings_vs_reference", r.crossings.tangent ? json("tangent") : json(r.crossings.count)},
            {"action_reference", r.action_reference},
            {"action_final", r.action_final},
            {"action_gain", r.action_gain},
            {"residual", r.residual},
            {"anomalies", r.anomalies},
            {"warnings", r.warnings},
            {"final_lift", lift_json(r.final_lift)}};
}

namespace {

struct Flags {
    std::string config;
    std::string out;
    std::string orbit;
    std::string mode;
    bool render = false;
    bool force = false;
    std::optional<double> epsilon, tol_stationary, max_time;
    std::optional<int> translates;
};

RunConfig resolve(const Flags& f) {
    RunConfig c = load_config(f.config);
    if (!f.out.empty()) c.out_dir = f.out;
    if (f.force) c.request.force = true;
    if (f.epsilon) c.request.epsilon = *f.epsilon;
    if (f.tol_stationary) c.request.flow.stationarity_tol = *f.tol_stationary;
    if (f.max_time) c.request.flow.max_time = *f.max_time;
    if (f.translates) c.render.translates = *f.translates;
    if (f.mode == "orbit") c.render.mode = RenderMode::OrbitFigure;
    else if (f.mode == "aubry") c.render.mode = RenderMode::AubryDiagram;
    c.render.birkhoff_n = c.request.n;
    c.render.birkhoff_m = c.request.m;
    return c;
}

void print_criterion(std::ostream& out, const RunConfig& c, const CriterionReport& r) {
    out << std::setprecision(12);
    out << "billiard  " << c.request.boundary.describe() << '\n';
    out << "kind      " << to_string(r.kind) << "  (n,m,N,s) = (" << r.n << ',' << r.m << ',' << r.N << ',' << r.s
        << ")  p=" << r.p << " q=" << r.q << '\n';
    out << "kappa     " << r.kappa << '\n';
    out << "L         " << r.L << '\n';
    out << "lhs       " << r.lhs << '\n';
    out << "rhs       " << r.rhs << '\n';
    out << "margin    " << r.margin << '\n';
    out << "verdict   " << r.verdict();
    if (r.holds()) {
        out << ": non-Birkhoff (" << r.p << ',' << r.q << ") orbit with " << r.predicted_crossings
            << " crossings predicted";
    }
    out << '\n';
}

int cmd_check(const Flags& f, std::ostream& out) {
    const auto c = resolve(f);
    const auto b = c.request.boundary.build();
    const auto r = evaluate_criterion(c.request, b);
    print_criterion(out, c, r);
    if (!f.out.empty()) {
        fs::create_directories(c.out_dir);
        write_text(fs::path(c.out_dir) / (c.name + "_criterion.json"), to_json(r).dump(2) + "\n");
    }
    return r.holds() ? kOk : kCriterionFails;
}

int cmd_find(const Flags& f, std::ostream& out) {
    const auto c = resolve(f);
    const auto b = c.request.boundary.build();
    auto log = logger();
    log->info("searching on {}", c.request.boundary.describe());
    OrbitReport r;
    try {
        r = find_orbit(c.request, b);
    } catch (const CriterionInconclusive& e) {
        print_criterion(out, c, evaluate_criterion(c.request, b));
        throw;
    }
    for (const auto& w : r.warnings) log->warn("{}", w);
    for (const auto& a : r.anomalies) log->warn("anomaly: {}", a);

    fs::create_directories(c.out_dir);
    const fs::path dir(c.out_dir);
    write_orbit_file((dir / (c.name + ".orbit")).string(), {r.final_lift, c.request.n, c.request.m});
    write_text(dir / (c.name + "_report.json"), to_json(r).dump(2) + "\n");
    if (f.render) {
        RenderSpec spec = c.render;
        write_text(dir / (c.name + ".svg"), spec.mode == RenderMode::AubryDiagram
                                                ? render_aubry_svg(r.final_lift, spec)
                                                : render_orbit_svg(b, r.final_lift, spec));
    }
    out << "outcome   " << to_string(r.outcome) << '\n';
    out << "period    " << r.minimal_period << "  winding " << r.winding << '\n';
    out << "group     order " << r.group.order() << "  type " << r.group.type_label << '\n';
    out << "crossings " << (r.crossings.tangent ? std::string("tangent") : std::to_string(r.crossings.count)) << '\n';
    out << "gain      " << r.action_gain << '\n';
    out << "residual  " << r.residual << '\n';
    if (r.outcome == Outcome::NonConverged) {
        log->error("flow failed: {} {}", to_string(r.flow_status), r.diagnostic);
        return kFlowFailure;
    }
    return kOk;
}

OrbitFile load_orbit(const std::string& path) {
    try {
        return read_orbit_file(path);
    } catch (const std::exception& e) {
        throw std::invalid_argument(e.what());
    }
}

int cmd_classify(const Flags& f, std::ostream& out) {
    const auto c = resolve(f);
    const auto b = c.request.boundary.build();
    const auto orbit = load_orbit(f.orbit);
    if (!in_sigma(orbit.lift)) throw std::invalid_argument("lift is not in Sigma");
    const int n = orbit.n > 0 ? orbit.n : c.request.n;
    OrbitReport r;
    r.final_lift = orbit.lift;
    if (orbit.m > 0 && gcd_int(orbit.m, n) == 1 && orbit.lift.p() % n == 0 &&
        orbit.lift.q() == orbit.m * (orbit.lift.p() / n)) {
        r.reference = symmetric_birkhoff(n, orbit.m, c.request.A).repeated(orbit.lift.p() / n);
    }
    classify_into(r, b, n);
    json j{{"is_birkhoff", r.is_birkhoff},
           {"minimal_period", r.minimal_period},
           {"winding", r.winding},
           {"group", to_json(r.group)},
           {"type_label", r.group.type_label},
           {"residual", r.residual},
           {"action", r.action_final}};
    if (r.reference.p() > 0) {
        j["crossings_vs_reference"] = r.crossings.tangent ? json("tangent") : json(r.crossings.count);
    }
    out << j.dump(2) << '\n';
    return kOk;
}

int cmd_render(const Flags& f, std::ostream& out) {
    const auto c = resolve(f);
    const auto b = c.request.boundary.build();
    const auto orbit = load_orbit(f.orbit);
    RenderSpec spec = c.render;
    if (orbit.n >= 2) spec.birkhoff_n = orbit.n, spec.birkhoff_m = orbit.m;
    const std::string svg = spec.mode == RenderMode::AubryDiagram ? render_aubry_svg(orbit.lift, spec)
                                                                  : render_orbit_svg(b, orbit.lift, spec);
    if (f.out.empty()) {
        out << svg;
    } else {
        fs::create_directories(c.out_dir);
        const auto path = fs::path(c.out_dir) /
                          (c.name + (spec.mode == RenderMode::AubryDiagram ? "_aubry.svg" : ".svg"));
        write_text(path, svg);
        out << path.string() << '\n';
    }
    return kOk;
}

int cmd_sweep(const Flags& f, std::ostream& out) {
    const auto c = resolve(f);
    if (c.sweep_values.empty()) throw std::invalid_argument("sweep.values is empty");
    const auto entries = sweep(c.request, c.sweep_parameter, c.sweep_values);
    json arr = json::array();
    out << std::left << std::setw(12) << (c.sweep_parameter == SweepParameter::S ? "s" : "alpha") << std::setw(8)
        << "p" << std::setw(16) << "margin" << "outcome\n";
    for (const auto& e : entries) {
        json j{{"parameter", e.parameter}};
        out << std::setw(12) << e.parameter;
        if (e.criterion) {
            j["criterion"] = to_json(*e.criterion);
            out << std::setw(8) << e.criterion->p << std::setw(16) << e.criterion->margin;
        } else {
            out << std::setw(8) << "-" << std::setw(16) << "-";
        }
        if (e.orbit) {
            j["orbit"] = to_json(*e.orbit);
            out << to_string(e.orbit->outcome);
        } else if (!e.error.empty()) {
            j["error"] = e.error;
            out << "error: " << e.error;
        } else {
            out << "skipped";
        }
        out << '\n';
        arr.push_back(j);
    }
    if (!f.out.empty()) {
        fs::create_directories(c.out_dir);
        write_text(fs::path(c.out_dir) / (c.name + "_sweep.json"), arr.dump(2) + "\n");
    }
    return kOk;
}

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Periodic orbits in symmetric convex billiards"};
    app.require_subcommand(1);
    Flags f;

    auto common = [&f](CLI::App* sub) {
        sub->add_option("--config", f.config, "configuration file")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", f.out, "output directory");
    };
    auto flow_flags = [&f](CLI::App* sub) {
        sub->add_flag("--force", f.force, "run even when the criterion is inconclusive");
        sub->add_option("--epsilon", f.epsilon, "perturbation size");
        sub->add_option("--tol-stationary", f.tol_stationary, "stationarity tolerance on |F|");
        sub->add_option("--max-time", f.max_time, "flow time limit");
    };

    auto* check = app.add_subcommand("check", "evaluate the existence criterion");
    common(check);
    auto* find = app.add_subcommand("find", "search for a symmetric non-Birkhoff orbit");
    common(find);
    flow_flags(find);
    find->add_flag("--render", f.render, "write an SVG figure");
    auto* classify = app.add_subcommand("classify", "classify an orbit file");
    common(classify);
    classify->add_option("orbit", f.orbit, "orbit file")->required();
    auto* render = app.add_subcommand("render", "render an orbit file as SVG");
    common(render);
    render->add_option("orbit", f.orbit, "orbit file")->required();
    render->add_option("--translates", f.translates, "integer translates in the Aubry diagram");
    render->add_option("--mode", f.mode, "orbit or aubry")->check(CLI::IsMember({"orbit", "aubry"}));
    auto* sw = app.add_subcommand("sweep", "run the pipeline over a list of s or alpha values");
    common(sw);
    flow_flags(sw);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kPrecondition;
    }

    try {
        if (*check) return cmd_check(f, out);
        if (*find) return cmd_find(f, out);
        if (*classify) return cmd_classify(f, out);
        if (*render) return cmd_render(f, out);
        if (*sw) return cmd_sweep(f, out);
    } catch (const CriterionInconclusive& e) {
        err << "error: " << e.what() << '\n';
        return kCriterionFails;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kPrecondition;
    } catch (const std::logic_error& e) {
        err << "error: " << e.what() << '\n';
        return kPrecondition;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kFlowFailure;
    }
    return kPrecondition;
}

}  // namespace billiard::cli
