#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "aoi/avg_aoi.hpp"
#include "aoi/distributions.hpp"

namespace aoi {

/// A policy literal from a config file. `optimal_threshold` stands for the
/// peak-AoI optimal AgeThreshold, resolved against the system parameters.
struct PolicySpec {
    StoppingPolicy policy = NoThresholdZeroWait{};
    bool optimal_threshold = false;

    StoppingPolicy resolve(const SystemParams& params) const;
    friend bool operator==(const PolicySpec&, const PolicySpec&) = default;
};

struct SolvePeakSpec {
    std::vector<double> lambda_grid = {0.2, 0.5, 1, 2, 5, 10, 20};
    std::optional<double> tol;
    friend bool operator==(const SolvePeakSpec&, const SolvePeakSpec&) = default;
};

struct VarianceSweepSpec {
    std::vector<double> theta_grid = {1, 5, 10, 20, 30, 50};
    friend bool operator==(const VarianceSweepSpec&, const VarianceSweepSpec&) = default;
};

enum class SweepAxis { Lambda, VarT, Theta };

std::string to_string(SweepAxis axis);
SweepAxis parse_axis(const std::string& name);
std::vector<double> default_grid(SweepAxis axis);

struct AvgSweepSpec {
    SweepAxis axis = SweepAxis::Lambda;
    std::vector<double> grid = default_grid(SweepAxis::Lambda);
    std::vector<double> waits = SearchSpec::default_waits();
    std::size_t scan_points = 256;
    friend bool operator==(const AvgSweepSpec&, const AvgSweepSpec&) = default;
};

struct EvalSpec {
    std::vector<PolicySpec> policies = {PolicySpec{}};
    friend bool operator==(const EvalSpec&, const EvalSpec&) = default;
};

struct SimulateSpec {
    PolicySpec policy;
    std::uint64_t departures = 100'000;
    std::uint32_t batches = 32;
    std::uint64_t seed = 1;
    std::uint64_t discard = 1;
    friend bool operator==(const SimulateSpec&, const SimulateSpec&) = default;
};

struct ValidateSpec {
    std::vector<PolicySpec> policies = {PolicySpec{}};
    std::uint64_t departures = 100'000;
    std::uint32_t batches = 32;
    std::uint64_t seed = 1;
    friend bool operator==(const ValidateSpec&, const ValidateSpec&) = default;
};

/// Whole experiment file: system literal plus one optional block per command.
struct ExperimentConfig {
    SystemParams system = default_system();
    std::optional<SolvePeakSpec> solve_peak;
    std::optional<VarianceSweepSpec> variance_sweep;
    std::optional<AvgSweepSpec> avg_sweep;
    std::optional<EvalSpec> eval;
    std::optional<SimulateSpec> simulate;
    std::optional<ValidateSpec> validate;

    /// lambda = 1, C in {1 w.p. 0.8, 21 w.p. 0.2}, E[T] = 1, Var(T) = 1.
    static SystemParams default_system();

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Parses JSON text. Throws ConfigError with the line/column of syntax
/// errors or the JSON pointer of the offending field.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

nlohmann::json to_json(const ExperimentConfig& config);
std::string serialize_config(const ExperimentConfig& config);

nlohmann::json policy_to_json(const PolicySpec& spec);
PolicySpec policy_from_json(const nlohmann::json& j, const std::string& where);

}  // namespace aoi
