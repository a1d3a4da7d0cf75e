#include "aoi/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "aoi/avg_aoi.hpp"
#include "aoi/parallel.hpp"
#include "aoi/peak_aoi.hpp"
#include "aoi/simulator.hpp"

namespace aoi {

std::string format_number(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::string CsvTable::to_csv() const {
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += cells[i];
        }
        out += '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
    return out;
}

std::size_t CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    throw std::out_of_range("no column named " + name);
}

double CsvTable::number(std::size_t row, const std::string& name) const {
    return std::stod(rows.at(row).at(column(name)));
}

namespace {

using Row = std::vector<std::string>;

template <class Fn>
std::vector<Row> rows_in_order(std::size_t n, unsigned threads, Fn&& make_row) {
    std::vector<Row> rows(n);
    parallel_for(n, threads, [&](std::size_t i) { rows[i] = make_row(i); });
    return rows;
}

}  // namespace

CsvTable cmd_solve_peak(const ExperimentConfig& cfg, const RunOptions& opts) {
    const SolvePeakSpec spec = cfg.solve_peak.value_or(SolvePeakSpec{});
    CsvTable t{{"lambda", "w_th", "peak_opt", "peak_no_threshold"}, {}};
    t.rows = rows_in_order(spec.lambda_grid.size(), opts.threads, [&](std::size_t i) {
        const SystemParams p = cfg.system.with_lambda(spec.lambda_grid[i]);
        const PeakSolution sol = solve_threshold(p, spec.tol);
        return Row{format_number(p.lambda()), format_number(sol.w_th),
                   format_number(sol.peak_aoi),
                   format_number(peak_aoi_threshold_policy(p, kInfinity))};
    });
    return t;
}

CsvTable cmd_variance_sweep(const ExperimentConfig& cfg, const RunOptions& opts) {
    const VarianceSweepSpec spec = cfg.variance_sweep.value_or(VarianceSweepSpec{});
    CsvTable t{{"theta", "mean_C", "var_C", "w_th", "peak_opt", "peak_no_threshold"}, {}};
    t.rows = rows_in_order(spec.theta_grid.size(), opts.threads, [&](std::size_t i) {
        const double theta = spec.theta_grid[i];
        const SystemParams p = cfg.system.with_sensing(DiscreteDist::theta_family(theta));
        const PeakSolution sol = solve_threshold(p);
        return Row{format_number(theta),
                   format_number(p.sensing_moments().mean),
                   format_number(p.sensing_moments().variance),
                   format_number(sol.w_th),
                   format_number(sol.peak_aoi),
                   format_number(peak_aoi_threshold_policy(p, kInfinity))};
    });
    return t;
}

namespace {

SystemParams apply_axis(const SystemParams& base, SweepAxis axis, double v) {
    switch (axis) {
        case SweepAxis::Lambda: return base.with_lambda(v);
        case SweepAxis::VarT:
            return base.with_transmission(TransmissionModel(base.transmission().mean(), v));
        case SweepAxis::Theta: return base.with_sensing(DiscreteDist::theta_family(v));
    }
    return base;
}

}  // namespace

CsvTable cmd_avg_sweep(const ExperimentConfig& cfg, const RunOptions& opts) {
    const AvgSweepSpec spec = cfg.avg_sweep.value_or(AvgSweepSpec{});
    CsvTable t{{to_string(spec.axis), "var_C", "hybrid_n_w", "hybrid_w_th", "hybrid_value",
                "pod_n_w", "pod_w_pod", "pod_value", "no_threshold_value", "K", "x_star"},
               {}};
    SearchSpec search;
    search.waits = spec.waits;
    search.scan_points = spec.scan_points;
    t.rows = rows_in_order(spec.grid.size(), opts.threads, [&](std::size_t i) {
        const SystemParams p = apply_axis(cfg.system, spec.axis, spec.grid[i]);
        const OptimizedPolicy hyb = optimize_policy(p, PolicyFamily::Hybrid, search);
        const OptimizedPolicy pod = optimize_policy(p, PolicyFamily::Pod, search);
        const Hybrid& h = std::get<Hybrid>(hyb.policy);
        const Pod& d = std::get<Pod>(pod.policy);
        const double base = average_aoi(p, policy_moments(p, NoThresholdZeroWait{}));
        return Row{format_number(spec.grid[i]),
                   format_number(p.sensing_moments().variance),
                   format_number(h.n_w),
                   format_number(h.w_th),
                   format_number(hyb.value),
                   format_number(d.n_w),
                   format_number(d.w_pod),
                   format_number(pod.value),
                   format_number(base),
                   format_number(k_criterion(p)),
                   format_number(x_star(p))};
    });
    return t;
}

CsvTable cmd_eval(const ExperimentConfig& cfg, const RunOptions& opts) {
    const EvalSpec spec = cfg.eval.value_or(EvalSpec{});
    const SystemParams& p = cfg.system;
    CsvTable t{{"policy", "mean_attempts", "mean_final_age", "mean_y", "mean_s", "peak_aoi",
                "avg_aoi"},
               {}};
    t.rows = rows_in_order(spec.policies.size(), opts.threads, [&](std::size_t i) {
        const StoppingPolicy policy = spec.policies[i].resolve(p);
        const PolicyMoments m = policy_moments(p, policy);
        return Row{describe(policy),
                   format_number(m.mean_attempts),
                   format_number(m.mean_final_age),
                   format_number(mean_inter_departure(p, m)),
                   format_number(mean_system_time(p, m)),
                   format_number(peak_aoi(p, m)),
                   format_number(average_aoi(p, m))};
    });
    return t;
}

CsvTable cmd_simulate(const ExperimentConfig& cfg, const RunOptions& opts) {
    const SimulateSpec spec = cfg.simulate.value_or(SimulateSpec{});
    const StoppingPolicy policy = spec.policy.resolve(cfg.system);
    validate_policy(cfg.system, policy);
    SimConfig sc{cfg.system,
                 policy,
                 opts.departures.value_or(spec.departures),
                 spec.batches,
                 opts.seed.value_or(spec.seed),
                 spec.discard,
                 opts.threads};
    const SimEstimate est = simulate(sc);
    CsvTable t{{"quantity", "estimate", "halfwidth"}, {}};
    auto add = [&](const char* name, double v, double hw) {
        t.rows.push_back({name, format_number(v), format_number(hw)});
    };
    add("avg_aoi", est.avg_aoi.mean, est.avg_aoi.halfwidth);
    add("avg_aoi_path", est.avg_aoi_path, 0.0);
    add("peak_aoi", est.peak_aoi.mean, est.peak_aoi.halfwidth);
    add("mean_attempts", est.mean_attempts.mean, est.mean_attempts.halfwidth);
    add("mean_y", est.mean_y.mean, est.mean_y.halfwidth);
    add("mean_s", est.mean_s.mean, est.mean_s.halfwidth);
    add("mean_final_age", est.mean_final_age.mean, est.mean_final_age.halfwidth);
    add("mean_x", est.mean_x.mean, est.mean_x.halfwidth);
    add("effective_rate", est.effective_rate, 0.0);
    add("cycles", static_cast<double>(est.cycles), 0.0);
    return t;
}

ValidateResult cmd_validate(const ExperimentConfig& cfg, const RunOptions& opts) {
    const ValidateSpec spec = cfg.validate.value_or(ValidateSpec{});
    ValidateResult out;
    out.table.header = {"policy", "quantity", "analytical", "simulated", "halfwidth", "z",
                        "exact", "flagged"};
    for (const PolicySpec& ps : spec.policies) {
        const StoppingPolicy policy = ps.resolve(cfg.system);
        const ValidationReport rep =
            validate(cfg.system, policy, opts.departures.value_or(spec.departures),
                     opts.seed.value_or(spec.seed), spec.batches, opts.threads);
        out.passed = out.passed && rep.passed();
        for (const ValidationRow& r : rep.rows) {
            out.table.rows.push_back({rep.policy, r.quantity, format_number(r.analytical),
                                      format_number(r.simulated), format_number(r.halfwidth),
                                      format_number(r.z), r.exact ? "1" : "0",
                                      r.flagged ? "1" : "0"});
        }
    }
    return out;
}

}  // namespace aoi
