#include "aoi/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "aoi/error.hpp"
#include "aoi/peak_aoi.hpp"

namespace aoi {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ConfigError("config error at " + (where.empty() ? std::string("/") : where) + ": " +
                      what);
}

void expect_object(const json& j, const std::string& where, std::set<std::string> allowed) {
    if (!j.is_object()) fail(where, "expected an object");
    for (const auto& [key, _] : j.items()) {
        if (!allowed.count(key)) fail(where + "/" + key, "unknown field");
    }
}

const json& member(const json& j, const char* key, const std::string& where) {
    const auto it = j.find(key);
    if (it == j.end()) fail(where + "/" + key, "missing required field");
    return *it;
}

double number(const json& j, const std::string& where) {
    if (!j.is_number()) fail(where, "expected a number");
    return j.get<double>();
}

/// Number or the string "inf".
double threshold(const json& j, const std::string& where) {
    if (j.is_string() && j.get<std::string>() == "inf") return kInfinity;
    if (!j.is_number()) fail(where, "expected a number or \"inf\"");
    return j.get<double>();
}

json threshold_json(double w) { return std::isinf(w) ? json("inf") : json(w); }

template <class T>
T count(const json& j, const std::string& where) {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
        fail(where, "expected a nonnegative integer");
    }
    return j.get<T>();
}

std::vector<double> number_list(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) fail(where, "expected a non-empty array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        out.push_back(number(j[i], where + "/" + std::to_string(i)));
    }
    return out;
}

/// Wraps a model constructor so DomainErrors carry the config location.
template <class F>
auto build(const std::string& where, F&& f) {
    try {
        return f();
    } catch (const DomainError& e) {
        fail(where, e.what());
    }
}

SystemParams system_from_json(const json& j, const std::string& where) {
    expect_object(j, where, {"lambda", "sensing", "transmission"});
    const double lambda = number(member(j, "lambda", where), where + "/lambda");

    const std::string sw = where + "/sensing";
    const json& sensing = member(j, "sensing", where);
    if (!sensing.is_array() || sensing.empty()) fail(sw, "expected a non-empty array of atoms");
    std::vector<Atom> atoms;
    for (std::size_t i = 0; i < sensing.size(); ++i) {
        const std::string aw = sw + "/" + std::to_string(i);
        expect_object(sensing[i], aw, {"value", "prob"});
        atoms.push_back({number(member(sensing[i], "value", aw), aw + "/value"),
                         number(member(sensing[i], "prob", aw), aw + "/prob")});
    }
    DiscreteDist dist = build(sw, [&] { return DiscreteDist(std::move(atoms)); });

    const std::string tw = where + "/transmission";
    const json& tr = member(j, "transmission", where);
    expect_object(tr, tw, {"mean", "variance"});
    const double t_mean = number(member(tr, "mean", tw), tw + "/mean");
    const double t_var = tr.contains("variance") ? number(tr["variance"], tw + "/variance") : 0.0;
    TransmissionModel trans = build(tw, [&] { return TransmissionModel(t_mean, t_var); });

    return build(where + "/lambda",
                 [&] { return SystemParams(lambda, std::move(dist), std::move(trans)); });
}

json system_to_json(const SystemParams& p) {
    json atoms = json::array();
    for (const Atom& a : p.sensing().atoms()) atoms.push_back({{"value", a.value}, {"prob", a.prob}});
    return {{"lambda", p.lambda()},
            {"sensing", atoms},
            {"transmission",
             {{"mean", p.transmission().mean()}, {"variance", p.transmission().variance()}}}};
}

std::vector<PolicySpec> policy_list(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) fail(where, "expected a non-empty array of policies");
    std::vector<PolicySpec> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        out.push_back(policy_from_json(j[i], where + "/" + std::to_string(i)));
    }
    return out;
}

json policy_list_json(const std::vector<PolicySpec>& ps) {
    json out = json::array();
    for (const auto& p : ps) out.push_back(policy_to_json(p));
    return out;
}

}  // namespace

StoppingPolicy PolicySpec::resolve(const SystemParams& params) const {
    if (optimal_threshold) return AgeThreshold{solve_threshold(params).w_th};
    return policy;
}

std::string to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::Lambda: return "lambda";
        case SweepAxis::VarT: return "var_T";
        case SweepAxis::Theta: return "theta";
    }
    return "lambda";
}

SweepAxis parse_axis(const std::string& name) {
    if (name == "lambda") return SweepAxis::Lambda;
    if (name == "var_T") return SweepAxis::VarT;
    if (name == "theta") return SweepAxis::Theta;
    throw ConfigError("unknown sweep axis '" + name + "' (expected lambda, var_T or theta)");
}

std::vector<double> default_grid(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::Lambda: return {0.2, 0.5, 1, 2, 5, 10, 20};
        case SweepAxis::VarT: return {0, 1, 10, 50, 100, 200};
        case SweepAxis::Theta: return {1, 5, 10, 20, 30, 50};
    }
    return {};
}

SystemParams ExperimentConfig::default_system() {
    return SystemParams(1.0, DiscreteDist({{1.0, 0.8}, {21.0, 0.2}}), TransmissionModel(1.0, 1.0));
}

PolicySpec policy_from_json(const json& j, const std::string& where) {
    if (!j.is_object()) fail(where, "expected a policy object");
    const json& type_j = member(j, "type", where);
    if (!type_j.is_string()) fail(where + "/type", "expected a string");
    const std::string type = type_j.get<std::string>();
    PolicySpec spec;
    if (type == "no_threshold") {
        expect_object(j, where, {"type"});
        spec.policy = NoThresholdZeroWait{};
    } else if (type == "age_threshold") {
        expect_object(j, where, {"type", "w_th"});
        const json& w = member(j, "w_th", where);
        if (w.is_string() && w.get<std::string>() == "optimal") {
            spec.optimal_threshold = true;
            spec.policy = AgeThreshold{};
        } else {
            spec.policy = AgeThreshold{threshold(w, where + "/w_th")};
        }
    } else if (type == "hybrid") {
        expect_object(j, where, {"type", "n_w", "w_th"});
        spec.policy = Hybrid{number(member(j, "n_w", where), where + "/n_w"),
                             threshold(member(j, "w_th", where), where + "/w_th")};
    } else if (type == "pod") {
        expect_object(j, where, {"type", "n_w", "w_pod"});
        spec.policy = Pod{number(member(j, "n_w", where), where + "/n_w"),
                          threshold(member(j, "w_pod", where), where + "/w_pod")};
    } else {
        fail(where + "/type", "unknown policy type '" + type +
                                  "' (expected no_threshold, age_threshold, hybrid or pod)");
    }
    return spec;
}

json policy_to_json(const PolicySpec& spec) {
    if (spec.optimal_threshold) return {{"type", "age_threshold"}, {"w_th", "optimal"}};
    return std::visit(
        [](const auto& p) -> json {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, NoThresholdZeroWait>) {
                return {{"type", "no_threshold"}};
            } else if constexpr (std::is_same_v<P, AgeThreshold>) {
                return {{"type", "age_threshold"}, {"w_th", threshold_json(p.w_th)}};
            } else if constexpr (std::is_same_v<P, Hybrid>) {
                return {{"type", "hybrid"}, {"n_w", p.n_w}, {"w_th", threshold_json(p.w_th)}};
            } else {
                return {{"type", "pod"}, {"n_w", p.n_w}, {"w_pod", threshold_json(p.w_pod)}};
            }
        },
        spec.policy);
}

ExperimentConfig parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        // nlohmann reports "... at line L, column C: ..." for syntax errors.
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
    expect_object(root, "", {"system", "solve_peak", "variance_sweep", "avg_sweep", "eval",
                             "simulate", "validate"});

    ExperimentConfig cfg;
    if (root.contains("system")) cfg.system = system_from_json(root["system"], "/system");

    if (root.contains("solve_peak")) {
        const std::string w = "/solve_peak";
        const json& j = root[w.substr(1)];
        expect_object(j, w, {"lambda_grid", "tol"});
        SolvePeakSpec s;
        if (j.contains("lambda_grid")) s.lambda_grid = number_list(j["lambda_grid"], w + "/lambda_grid");
        for (std::size_t i = 0; i < s.lambda_grid.size(); ++i) {
            if (!(s.lambda_grid[i] > 0.0)) fail(w + "/lambda_grid/" + std::to_string(i), "lambda must be positive");
        }
        if (j.contains("tol")) {
            s.tol = number(j["tol"], w + "/tol");
            if (!(*s.tol > 0.0)) fail(w + "/tol", "tolerance must be positive");
        }
        cfg.solve_peak = s;
    }

    if (root.contains("variance_sweep")) {
        const std::string w = "/variance_sweep";
        const json& j = root[w.substr(1)];
        expect_object(j, w, {"theta_grid"});
        VarianceSweepSpec s;
        if (j.contains("theta_grid")) s.theta_grid = number_list(j["theta_grid"], w + "/theta_grid");
        for (std::size_t i = 0; i < s.theta_grid.size(); ++i) {
            if (!(s.theta_grid[i] > 0.0)) fail(w + "/theta_grid/" + std::to_string(i), "theta must be positive");
        }
        cfg.variance_sweep = s;
    }

    if (root.contains("avg_sweep")) {
        const std::string w = "/avg_sweep";
        const json& j = root[w.substr(1)];
        expect_object(j, w, {"axis", "grid", "waits", "scan_points"});
        AvgSweepSpec s;
        if (j.contains("axis")) {
            if (!j["axis"].is_string()) fail(w + "/axis", "expected a string");
            try {
                s.axis = parse_axis(j["axis"].get<std::string>());
            } catch (const ConfigError& e) {
                fail(w + "/axis", e.what());
            }
        }
        s.grid = j.contains("grid") ? number_list(j["grid"], w + "/grid") : default_grid(s.axis);
        for (std::size_t i = 0; i < s.grid.size(); ++i) {
            const double v = s.grid[i];
            const bool ok = s.axis == SweepAxis::VarT ? v >= 0.0 : v > 0.0;
            if (!ok) fail(w + "/grid/" + std::to_string(i), "grid value out of range for axis");
        }
        if (j.contains("waits")) {
            s.waits = number_list(j["waits"], w + "/waits");
            for (std::size_t i = 0; i < s.waits.size(); ++i) {
                if (!(s.waits[i] >= 0.0)) fail(w + "/waits/" + std::to_string(i), "n_w must be nonnegative");
            }
        }
        if (j.contains("scan_points")) {
            s.scan_points = count<std::size_t>(j["scan_points"], w + "/scan_points");
            if (s.scan_points < 3) fail(w + "/scan_points", "need at least 3 scan points");
        }
        cfg.avg_sweep = s;
    }

    if (root.contains("eval")) {
        const std::string w = "/eval";
        const json& j = root["eval"];
        expect_object(j, w, {"policies"});
        EvalSpec s;
        if (j.contains("policies")) s.policies = policy_list(j["policies"], w + "/policies");
        cfg.eval = s;
    }

    if (root.contains("simulate")) {
        const std::string w = "/simulate";
        const json& j = root["simulate"];
        expect_object(j, w, {"policy", "departures", "batches", "seed", "discard"});
        SimulateSpec s;
        if (j.contains("policy")) s.policy = policy_from_json(j["policy"], w + "/policy");
        if (j.contains("departures")) s.departures = count<std::uint64_t>(j["departures"], w + "/departures");
        if (j.contains("batches")) s.batches = count<std::uint32_t>(j["batches"], w + "/batches");
        if (j.contains("seed")) s.seed = count<std::uint64_t>(j["seed"], w + "/seed");
        if (j.contains("discard")) s.discard = count<std::uint64_t>(j["discard"], w + "/discard");
        cfg.simulate = s;
    }

    if (root.contains("validate")) {
        const std::string w = "/validate";
        const json& j = root["validate"];
        expect_object(j, w, {"policies", "departures", "batches", "seed"});
        ValidateSpec s;
        if (j.contains("policies")) s.policies = policy_list(j["policies"], w + "/policies");
        if (j.contains("departures")) s.departures = count<std::uint64_t>(j["departures"], w + "/departures");
        if (j.contains("batches")) s.batches = count<std::uint32_t>(j["batches"], w + "/batches");
        if (j.contains("seed")) s.seed = count<std::uint64_t>(j["seed"], w + "/seed");
        cfg.validate = s;
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_config(buf.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

json to_json(const ExperimentConfig& cfg) {
    json root;
    root["system"] = system_to_json(cfg.system);
    if (cfg.solve_peak) {
        json j{{"lambda_grid", cfg.solve_peak->lambda_grid}};
        if (cfg.solve_peak->tol) j["tol"] = *cfg.solve_peak->tol;
        root["solve_peak"] = j;
    }
    if (cfg.variance_sweep) root["variance_sweep"] = {{"theta_grid", cfg.variance_sweep->theta_grid}};
    if (cfg.avg_sweep) {
        root["avg_sweep"] = {{"axis", to_string(cfg.avg_sweep->axis)},
                             {"grid", cfg.avg_sweep->grid},
                             {"waits", cfg.avg_sweep->waits},
                             {"scan_points", cfg.avg_sweep->scan_points}};
    }
    if (cfg.eval) root["eval"] = {{"policies", policy_list_json(cfg.eval->policies)}};
    if (cfg.simulate) {
        root["simulate"] = {{"policy", policy_to_json(cfg.simulate->policy)},
                            {"departures", cfg.simulate->departures},
                            {"batches", cfg.simulate->batches},
                            {"seed", cfg.simulate->seed},
                            {"discard", cfg.simulate->discard}};
    }
    if (cfg.validate) {
        root["validate"] = {{"policies", policy_list_json(cfg.validate->policies)},
                            {"departures", cfg.validate->departures},
                            {"batches", cfg.validate->batches},
                            {"seed", cfg.validate->seed}};
    }
    return root;
}

std::string serialize_config(const ExperimentConfig& cfg) { return to_json(cfg).dump(2) + "\n"; }

}  // namespace aoi
