#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aoi/config.hpp"

namespace aoi {

/// Comma-separated table. Numbers use 9 significant digits ("%.9g"),
/// infinities print as "inf".
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string to_csv() const;
    /// Column index by name; throws std::out_of_range.
    std::size_t column(const std::string& name) const;
    double number(std::size_t row, const std::string& name) const;
};

std::string format_number(double v);

/// Command-line overrides shared by the simulation commands.
struct RunOptions {
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> departures;
    unsigned threads = 1;
};

/// lambda, w_th, peak_opt, peak_no_threshold over the lambda grid.
CsvTable cmd_solve_peak(const ExperimentConfig& cfg, const RunOptions& opts = {});

/// theta, mean_C, var_C, w_th, peak_opt, peak_no_threshold with
/// C in {1, 10 + theta}, p2 = 4 / (9 + theta).
CsvTable cmd_variance_sweep(const ExperimentConfig& cfg, const RunOptions& opts = {});

/// Best hybrid and POD rules vs. the no-threshold rule along one axis.
CsvTable cmd_avg_sweep(const ExperimentConfig& cfg, const RunOptions& opts = {});

/// Closed-form metrics for each configured policy.
CsvTable cmd_eval(const ExperimentConfig& cfg, const RunOptions& opts = {});

/// quantity, estimate, halfwidth for one simulated policy.
CsvTable cmd_simulate(const ExperimentConfig& cfg, const RunOptions& opts = {});

struct ValidateResult {
    CsvTable table;
    bool passed = true;  ///< no exactness-expected quantity with |z| > 3
};

ValidateResult cmd_validate(const ExperimentConfig& cfg, const RunOptions& opts = {});

}  // namespace aoi
