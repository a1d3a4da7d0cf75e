// Experiment driver: peak-AoI threshold solving, average-AoI policy sweeps,
// Monte Carlo simulation and analytics-vs-simulation validation.
//
// Exit codes: 0 success, 1 config error, 2 validation failure,
// 3 internal numeric failure.

#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "aoi/error.hpp"
#include "aoi/experiments.hpp"

namespace {

enum ExitCode { kOk = 0, kConfigError = 1, kValidationFailure = 2, kNumericFailure = 3 };

int write_output(const std::string& out, const std::string& text) {
    if (out.empty() || out == "stdout" || out == "-") {
        std::cout << text;
        return kOk;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f) {
        std::cerr << "error: cannot open output file '" << out << "'\n";
        return kConfigError;
    }
    f << text;
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Status-update policies for an intermittently powered sensor"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out = "stdout";
    aoi::RunOptions opts;
    std::uint64_t seed = 0;
    std::uint64_t departures = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "Experiment config (JSON)");
        sub->add_option("--out", out, "Output CSV path, or stdout");
        sub->add_option("--threads", opts.threads, "Worker threads (0 = hardware)");
    };
    auto add_sim = [&](CLI::App* sub) {
        sub->add_option("--seed", seed, "RNG seed (overrides config)");
        sub->add_option("--departures", departures, "Measured departures (overrides config)");
    };

    auto* solve = app.add_subcommand("solve-peak", "Optimal peak-AoI thresholds over a lambda grid");
    auto* var = app.add_subcommand("variance-sweep", "Optimal peak AoI over the theta family");
    auto* avg = app.add_subcommand("avg-sweep", "Best hybrid/POD rules for average AoI");
    auto* eval = app.add_subcommand("eval", "Closed-form metrics of configured policies");
    auto* sim = app.add_subcommand("simulate", "Monte Carlo estimate for one policy");
    auto* val = app.add_subcommand("validate", "Analytics vs simulation z-scores");
    for (auto* s : {solve, var, avg, eval, sim, val}) add_common(s);
    add_sim(sim);
    add_sim(val);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // Help and version requests exit 0; usage errors count as config errors.
        return app.exit(e) == 0 ? kOk : kConfigError;
    }

    for (auto* s : {sim, val}) {
        if (s->count("--seed")) opts.seed = seed;
        if (s->count("--departures")) opts.departures = departures;
    }

    try {
        const aoi::ExperimentConfig cfg =
            config_path.empty() ? aoi::ExperimentConfig{} : aoi::load_config(config_path);

        if (*val) {
            const aoi::ValidateResult r = aoi::cmd_validate(cfg, opts);
            const int rc = write_output(out, r.table.to_csv());
            if (rc != kOk) return rc;
            if (!r.passed) {
                std::cerr << "validation failed: an exact quantity deviates by |z| > 3\n";
                return kValidationFailure;
            }
            return kOk;
        }

        aoi::CsvTable table;
        if (*solve) table = aoi::cmd_solve_peak(cfg, opts);
        else if (*var) table = aoi::cmd_variance_sweep(cfg, opts);
        else if (*avg) table = aoi::cmd_avg_sweep(cfg, opts);
        else if (*eval) table = aoi::cmd_eval(cfg, opts);
        else table = aoi::cmd_simulate(cfg, opts);
        return write_output(out, table.to_csv());
    } catch (const aoi::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfigError;
    } catch (const aoi::DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return kNumericFailure;
    }
}
