// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "aoi/avg_aoi.hpp"
#include "aoi/experiments.hpp"
#include "aoi/peak_aoi.hpp"
#include "aoi/simulator.hpp"
#include "support/oracles.hpp"

using namespace aoi;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

SystemParams fig_params(double lambda, double t_var) {
    return SystemParams(lambda, DiscreteDist({{1.0, 0.8}, {21.0, 0.2}}),
                        TransmissionModel(1.0, t_var));
}

int failures = 0;

void run(int id, const char* name, double budget_s, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o.ok = false;
        o.detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (budget_s > 0.0) o.require(secs < budget_s, fmt("runtime %.2fs over %.0fs", secs, budget_s));
    if (!o.ok) ++failures;
    std::printf("[%s] %d %s (%.2fs)%s%s\n", o.ok ? "PASS" : "FAIL", id, name, secs,
                o.detail.empty() ? "" : ": ", o.detail.c_str());
    std::fflush(stdout);
}

Outcome benchmark() {
    Outcome o;
    const SystemParams p = fig_params(10.0, 1.0);
    const double analytical = peak_aoi(p, policy_moments(p, NoThresholdZeroWait{}));
    o.require(std::abs(analytical - 12.3) <= 1e-9, fmt("analytical %.12g", analytical));
    SimConfig c{p, NoThresholdZeroWait{}};
    c.num_departures = 100'000;
    const SimEstimate est = simulate(c);
    o.require(std::abs(est.peak_aoi.mean - 12.3) <= est.peak_aoi.halfwidth,
              fmt("simulated %.6g +- %.3g", est.peak_aoi.mean, est.peak_aoi.halfwidth));
    if (o.ok) {
        o.detail = fmt("analytical %.10g, simulated %.5g +- %.3g", analytical, est.peak_aoi.mean,
                       est.peak_aoi.halfwidth);
    }
    return o;
}

Outcome fixed_point() {
    Outcome o;
    std::vector<SystemParams> cases;
    std::mt19937_64 gen(20'240'601);
    std::uniform_real_distribution<double> lam(0.05, 30.0);
    for (int i = 0; i < 20; ++i) {
        cases.emplace_back(lam(gen), DiscreteDist(oracle::random_two_point(gen)),
                           TransmissionModel(1.0, 1.0));
    }
    for (double l : {1.0, 5.0, 10.0, 20.0}) {
        cases.emplace_back(l, DiscreteDist({{1.0, 0.8}, {40.0, 0.2}}), TransmissionModel(1.0, 0.0));
    }
    double worst_fp = 0.0;
    for (std::size_t k = 0; k < cases.size(); ++k) {
        const AgeMixtureDensity d = build_age_density(cases[k]);
        const double w = solve_threshold(cases[k]).w_th;
        const double m = d.support_start();
        const double hi = m + 50.0 * d.mean();
        const std::size_t n = 10'000;
        const auto g = [&](double x) { return g_root_function(d, x); };
        const int changes = oracle::sign_changes(g, m, hi, n);
        o.require(changes == 1, "case " + std::to_string(k) + ": " + std::to_string(changes) +
                                    " sign changes");
        const double fp = std::abs(w - threshold_cost(d, w));
        worst_fp = std::max(worst_fp, fp);
        o.require(fp <= 1e-8, "case " + std::to_string(k) + fmt(": |W - c_W| = %.3g", fp));

        // Between atoms c_x varies by less than double rounding, so two checks:
        // no grid point beats c_W beyond rounding, and descending along the
        // exact sign of c' = f g / F^2 (f > 0 past m*) stops next to W.
        const double step = (hi - m) / static_cast<double>(n - 1);
        const double c_w = threshold_cost(d, w);
        double best_c = kInfinity;
        for (std::size_t i = 1; i < n; ++i) {
            best_c = std::min(best_c, threshold_cost(d, m + step * static_cast<double>(i)));
        }
        o.require(best_c >= c_w * (1.0 - 1e-12),
                  "case " + std::to_string(k) + fmt(": grid c %.12g below c_W %.12g", best_c, c_w));
        std::size_t i = 1;
        while (i + 1 < n && g(m + step * (static_cast<double>(i) + 0.5)) < 0.0) ++i;
        const double walk = m + step * static_cast<double>(i);
        o.require(std::abs(walk - w) <= step,
                  "case " + std::to_string(k) + fmt(": descent stops at %.6g vs W %.6g", walk, w));
    }
    if (o.ok) o.detail = std::to_string(cases.size()) + fmt(" cases, max |W - c_W| = %.2g", worst_fp);
    return o;
}

Outcome oracle_exactness() {
    Outcome o;
    double worst = 0.0;
    for (double lambda : {1.0, 10.0}) {
        const SystemParams p = fig_params(lambda, 1.0);
        const StoppingPolicy thr = AgeThreshold{solve_threshold(p).w_th};
        for (std::uint64_t seed : {1, 2, 3}) {
            const ValidationReport none = validate(p, NoThresholdZeroWait{}, 100'000, seed);
            const ValidationReport t = validate(p, thr, 100'000, seed);
            const double zs[] = {none.row("peak_aoi").z, none.row("avg_aoi").z, t.row("peak_aoi").z};
            const char* names[] = {"no_threshold peak", "no_threshold avg", "age_threshold peak"};
            for (int i = 0; i < 3; ++i) {
                worst = std::max(worst, std::abs(zs[i]));
                o.require(std::abs(zs[i]) <= 3.0,
                          std::string(names[i]) + fmt(" lambda %.3g seed %.0f z = %.3g", lambda,
                                                      static_cast<double>(seed), zs[i]));
            }
        }
    }
    if (o.ok) o.detail = fmt("max |z| = %.3g over 2 systems x 3 seeds", worst);
    return o;
}

Outcome peak_trends() {
    Outcome o;
    ExperimentConfig cfg;
    cfg.system = fig_params(1.0, 1.0);
    cfg.solve_peak = SolvePeakSpec{};
    const CsvTable solve = cmd_solve_peak(cfg);
    double prev_gap = -1.0;
    for (std::size_t r = 0; r < solve.rows.size(); ++r) {
        const double opt = solve.number(r, "peak_opt"), base = solve.number(r, "peak_no_threshold");
        o.require(opt <= base, fmt("lambda %.3g: optimum above baseline", solve.number(r, "lambda")));
        const double gap = base - opt;
        o.require(gap >= prev_gap - 1e-9, fmt("gap decreased at lambda %.3g", solve.number(r, "lambda")));
        prev_gap = gap;
    }
    cfg.system = SystemParams(10.0, DiscreteDist::point(5.0), TransmissionModel(1.0, 1.0));
    cfg.variance_sweep = VarianceSweepSpec{};
    const CsvTable var = cmd_variance_sweep(cfg);
    double prev = kInfinity;
    for (std::size_t r = 0; r < var.rows.size(); ++r) {
        const double opt = var.number(r, "peak_opt");
        o.require(opt <= prev + 1e-9, fmt("theta %.3g: optimum increased", var.number(r, "theta")));
        o.require(var.rows[r][var.column("peak_no_threshold")] == var.rows[0][var.column("peak_no_threshold")],
                  "baseline varies with theta");
        o.require(std::abs(var.number(r, "mean_C") - 5.0) <= 1e-12, "E[C] drifts from 5");
        prev = opt;
    }
    if (o.ok) {
        o.detail = fmt("lambda gap %.4g -> %.4g", solve.number(0, "peak_no_threshold") - solve.number(0, "peak_opt"),
                       prev_gap);
        o.detail += fmt("; theta optimum %.4g -> %.4g, baseline %.4g", var.number(0, "peak_opt"), prev,
                        var.number(0, "peak_no_threshold"));
    }
    return o;
}

Outcome avg_trends() {
    Outcome o;
    ExperimentConfig cfg;
    cfg.system = fig_params(1.0, 1.0);

    // Containment along every axis.
    for (SweepAxis axis : {SweepAxis::Lambda, SweepAxis::VarT, SweepAxis::Theta}) {
        AvgSweepSpec spec;
        spec.axis = axis;
        spec.grid = default_grid(axis);
        cfg.avg_sweep = spec;
        if (axis == SweepAxis::Theta) cfg.system = fig_params(1.0, 200.0);
        const CsvTable t = cmd_avg_sweep(cfg);
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            const double base = t.number(r, "no_threshold_value");
            o.require(t.number(r, "hybrid_value") <= base && t.number(r, "pod_value") <= base,
                      to_string(axis) + fmt(" %.3g: policy worse than baseline", t.number(r, to_string(axis))));
        }
        if (axis == SweepAxis::VarT) {
            double prev_h = -1.0, prev_p = -1.0;
            for (std::size_t r = 0; r < t.rows.size(); ++r) {
                const double base = t.number(r, "no_threshold_value");
                const double gh = base - t.number(r, "hybrid_value");
                const double gp = base - t.number(r, "pod_value");
                o.require(gh >= prev_h - 1e-9 && gp >= prev_p - 1e-9,
                          fmt("improvement shrinks at var_T %.3g", t.number(r, "var_T")));
                prev_h = gh;
                prev_p = gp;
            }
            o.detail = fmt("gains at var_T=200: hybrid %.4g, pod %.4g", prev_h, prev_p);
        }
        cfg.system = fig_params(1.0, 1.0);
    }

    const SystemParams p1 = fig_params(1.0, 1.0);
    const OptimizedPolicy h = optimize_policy(p1, PolicyFamily::Hybrid);
    const OptimizedPolicy q = optimize_policy(p1, PolicyFamily::Pod);
    o.require(std::get<Hybrid>(h.policy).n_w == 0.0, "hybrid optimum at var_T=1 waits");
    o.require(std::get<Pod>(q.policy).n_w == 0.0, "POD optimum at var_T=1 waits");

    const SystemParams p200 = fig_params(1.0, 200.0);
    const double k = k_criterion(p200), xs = x_star(p200);
    o.require(std::abs(k - 1076.0) <= 1e-9, fmt("K = %.12g", k));
    o.require(std::abs(xs - 11.392) <= 1e-3, fmt("x* = %.6g", xs));
    o.require(initial_waiting_suggested(p200), "waiting flag not set");
    o.detail += fmt("; K = %.6g, x* = %.6g", k, xs);
    return o;
}

Outcome self_consistency() {
    Outcome o;
    const SystemParams p = fig_params(1.0, 1.0);
    Rng rng(2024);
    double s_prev = 0.0;
    std::uint64_t bad = 0;
    const StoppingPolicy policies[] = {NoThresholdZeroWait{}, AgeThreshold{4.0}, Hybrid{1.5, 4.0},
                                       Pod{2.0, 0.3}};
    for (std::uint64_t i = 0; i < 1'000'000; ++i) {
        const CycleRecord r = run_cycle(p, policies[i % 4], s_prev, rng);
        const bool good = r.y == r.i0 + r.age_sum + r.service && r.s == r.final_age + r.service &&
                          r.q == 0.5 * ((r.s_prev + r.y) * (r.s_prev + r.y) - r.s * r.s) &&
                          r.peak == r.s_prev + r.y && r.attempts >= 1 && r.attempts > r.waits;
        if (!good) ++bad;
        s_prev = r.s;
    }
    o.require(bad == 0, std::to_string(bad) + " cycles break an identity");

    SimConfig c{p, Hybrid{1.0, 5.0}};
    c.num_departures = 200'000;
    c.seed = 17;
    c.threads = 1;
    const SimEstimate a = simulate(c);
    const double dual = std::abs(a.path_area - (a.renewal_area - a.boundary_area)) / a.renewal_area;
    o.require(dual <= 1e-9, fmt("dual integration mismatch %.3g", dual));
    o.require(a.max_clock_residual <= 1e-9, fmt("clock residual %.3g", a.max_clock_residual));

    bool identical = true;
    for (unsigned threads : {2u, 4u, 8u}) {
        c.threads = threads;
        const SimEstimate b = simulate(c);
        identical = identical && a.avg_aoi.mean == b.avg_aoi.mean &&
                    a.avg_aoi.halfwidth == b.avg_aoi.halfwidth && a.peak_aoi.mean == b.peak_aoi.mean &&
                    a.path_area == b.path_area && a.attempt_histogram == b.attempt_histogram;
    }
    o.require(identical, "results differ across thread counts");
    if (o.ok) o.detail = fmt("1e6 cycles, dual mismatch %.2g, clock residual %.2g", dual, a.max_clock_residual);
    return o;
}

Outcome dependent_stopping_probe() {
    Outcome o;
    ExperimentConfig cfg;
    cfg.system = fig_params(1.0, 200.0);
    ValidateSpec spec;
    spec.policies = {PolicySpec{Hybrid{2.0, 6.0}, false}, PolicySpec{Pod{1.0, 0.5}, false}};
    spec.departures = 100'000;
    cfg.validate = spec;
    const ValidateResult v = cmd_validate(cfg);
    o.require(!v.table.rows.empty(), "empty report");
    std::printf("    policy, analytical avg AoI, simulated, halfwidth, z\n");
    for (const auto& row : v.table.rows) {
        if (row[v.table.column("quantity")] != "avg_aoi") continue;
        std::printf("    %s, %s, %s, %s, %s\n", row[0].c_str(), row[v.table.column("analytical")].c_str(),
                    row[v.table.column("simulated")].c_str(), row[v.table.column("halfwidth")].c_str(),
                    row[v.table.column("z")].c_str());
        o.require(row[v.table.column("exact")] == "0", "dependent stopping marked exact");
    }
    o.require(v.passed, "an exact quantity failed");
    if (o.ok) o.detail = "gap report emitted, closed form not asserted";
    return o;
}

}  // namespace

int main() {
    run(1, "no-threshold peak AoI benchmark", 5.0, benchmark);
    run(2, "threshold fixed point", 10.0, fixed_point);
    run(3, "closed forms match simulation", 60.0, oracle_exactness);
    run(4, "peak AoI trends over lambda and theta", 0.0, peak_trends);
    run(5, "average AoI trends and waiting criterion", 0.0, avg_trends);
    run(6, "simulator self-consistency", 0.0, self_consistency);
    run(7, "dependent stopping gap report", 0.0, dependent_stopping_probe);
    std::printf("%d of 7 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
