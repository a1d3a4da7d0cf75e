#include "aoi/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "aoi/error.hpp"
#include "aoi/parallel.hpp"

namespace aoi {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr double kNormalQuantile95 = 1.96;

/// Per-cycle view of a stopping rule; the randomized wait is drawn once.
class CycleRule {
public:
    CycleRule(const StoppingPolicy& policy, Rng& rng) : policy_(policy) {
        const double n_w = mean_wait(policy);
        const double base = std::floor(n_w);
        const double frac = n_w - base;
        waits_ = static_cast<std::uint64_t>(base);
        if (frac > 0.0 && rng.uniform_open0() <= frac) ++waits_;
    }

    std::uint64_t waits() const { return waits_; }

    bool transmit(std::uint64_t k, double age, double outage) const {
        if (k <= waits_) return false;
        return std::visit(Overloaded{
                              [](const NoThresholdZeroWait&) { return true; },
                              [&](const AgeThreshold& p) { return age < p.w_th; },
                              [&](const Hybrid& p) { return age < p.w_th; },
                              [&](const Pod& p) { return outage < p.w_pod; },
                          },
                          policy_);
    }

private:
    const StoppingPolicy& policy_;
    std::uint64_t waits_ = 0;
};

void check_simulable(const StoppingPolicy& policy) {
    // Age thresholds at or below m* are accepted here; the attempt cap catches them.
    std::visit(Overloaded{
                   [](const NoThresholdZeroWait&) {},
                   [](const AgeThreshold& p) {
                       if (std::isnan(p.w_th)) throw DomainError("threshold is NaN");
                   },
                   [](const Hybrid& p) {
                       if (!(std::isfinite(p.n_w) && p.n_w >= 0.0) || std::isnan(p.w_th))
                           throw DomainError("invalid hybrid parameters");
                   },
                   [](const Pod& p) {
                       if (!(std::isfinite(p.n_w) && p.n_w >= 0.0) || std::isnan(p.w_pod))
                           throw DomainError("invalid POD parameters");
                   },
               },
               policy);
}

}  // namespace

void SimConfig::validate() const {
    if (num_batches < 2) throw DomainError("need at least 2 batches");
    if (num_departures < num_batches) throw DomainError("need num_departures >= num_batches");
    if (num_departures / num_batches < 10) throw DomainError("need at least 10 departures per batch");
    if (max_attempts == 0) throw DomainError("attempt cap must be positive");
    check_simulable(policy);
}

CycleRecord run_cycle(const SystemParams& params, const StoppingPolicy& policy, double s_prev,
                      Rng& rng, std::uint64_t max_attempts) {
    CycleRecord rec;
    rec.s_prev = s_prev;
    rec.i0 = sample_outage(params, rng);
    const CycleRule rule(policy, rng);
    rec.waits = rule.waits();

    for (std::uint64_t k = 1;; ++k) {
        if (k > max_attempts) {
            throw NumericError("stopping rule did not stop within the attempt cap; "
                               "the threshold may be below the sensing support");
        }
        const double c = sample_sensing(params, rng);
        const double i = sample_outage(params, rng);
        const double a = c + i;
        rec.age_sum += a;
        if (rule.transmit(k, a, i)) {
            rec.attempts = k;
            rec.final_age = a;
            rec.final_outage = i;
            break;
        }
    }
    rec.service = sample_transmission(params, rng);
    rec.y = rec.i0 + rec.age_sum + rec.service;
    rec.s = rec.final_age + rec.service;
    rec.peak = rec.s_prev + rec.y;
    rec.q = 0.5 * (rec.peak * rec.peak - rec.s * rec.s);
    rec.x = rec.y + rec.s_prev - rec.s;
    return rec;
}

namespace {

struct ReplicaTotals {
    std::uint64_t cycles = 0;
    double q = 0.0;
    double y = 0.0;
    double peak = 0.0;
    double attempts = 0.0;
    double s = 0.0;
    double final_age = 0.0;
    double x = 0.0;
    double age_sum = 0.0;
    double path_area = 0.0;
    double boundary = 0.0;
    double window = 0.0;
    double max_clock_residual = 0.0;
    std::vector<std::uint64_t> histogram;
};

ReplicaTotals run_replica(const SimConfig& cfg, std::uint32_t replica, std::uint64_t cycles) {
    Rng rng(cfg.seed, replica);
    ReplicaTotals tot;
    double s_prev = 0.0;
    double departure = 0.0;  // absolute time of the latest delivery
    for (std::uint64_t d = 0; d < cfg.discard_first_cycles; ++d) {
        const CycleRecord rec = run_cycle(cfg.params, cfg.policy, s_prev, rng, cfg.max_attempts);
        departure += rec.y;
        s_prev = rec.s;
    }
    const double window_start = departure;
    tot.boundary = 0.5 * s_prev * s_prev;

    for (std::uint64_t n = 0; n < cycles; ++n) {
        const CycleRecord rec = run_cycle(cfg.params, cfg.policy, s_prev, rng, cfg.max_attempts);

        // Absolute-clock reconstruction: the previous packet was generated at
        // u = departure - s_prev, and AoI grows as t - u until the next delivery.
        const double generated_prev = departure - rec.s_prev;
        const double sensing_start = departure + rec.i0 + (rec.age_sum - rec.final_age);
        const double next_departure = sensing_start + rec.final_age + rec.service;
        const double age_before = departure - generated_prev;
        const double age_after = next_departure - generated_prev;
        tot.path_area += 0.5 * (age_after * age_after - age_before * age_before);
        tot.max_clock_residual =
            std::max(tot.max_clock_residual, std::abs((next_departure - departure) - rec.y) / rec.y);
        departure = next_departure;

        ++tot.cycles;
        tot.q += rec.q;
        tot.y += rec.y;
        tot.peak += rec.peak;
        tot.attempts += static_cast<double>(rec.attempts);
        tot.s += rec.s;
        tot.final_age += rec.final_age;
        tot.x += rec.x;
        tot.age_sum += rec.age_sum;
        if (tot.histogram.size() <= rec.attempts) tot.histogram.resize(rec.attempts + 1, 0);
        ++tot.histogram[rec.attempts];
        s_prev = rec.s;
    }
    tot.boundary -= 0.5 * s_prev * s_prev;
    tot.window = departure - window_start;
    return tot;
}

Interval batch_interval(double pooled, const std::vector<double>& batch_values) {
    const double b = static_cast<double>(batch_values.size());
    double mean = 0.0;
    for (double v : batch_values) mean += v;
    mean /= b;
    double ss = 0.0;
    for (double v : batch_values) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / (b - 1.0));
    return {pooled, kNormalQuantile95 * sd / std::sqrt(b)};
}

}  // namespace

SimEstimate simulate(const SimConfig& config) {
    config.validate();
    const std::uint32_t batches = config.num_batches;
    std::vector<ReplicaTotals> replicas(batches);
    const std::uint64_t per = config.num_departures / batches;
    const std::uint64_t extra = config.num_departures % batches;

    parallel_for(batches, config.threads, [&](std::size_t r) {
        const std::uint64_t n = per + (r < extra ? 1 : 0);
        replicas[r] = run_replica(config, static_cast<std::uint32_t>(r), n);
    });

    SimEstimate est;
    est.batches = batches;
    ReplicaTotals all;
    for (const ReplicaTotals& t : replicas) {
        all.cycles += t.cycles;
        all.q += t.q;
        all.y += t.y;
        all.peak += t.peak;
        all.attempts += t.attempts;
        all.s += t.s;
        all.final_age += t.final_age;
        all.x += t.x;
        all.age_sum += t.age_sum;
        all.path_area += t.path_area;
        all.boundary += t.boundary;
        all.window += t.window;
        all.max_clock_residual = std::max(all.max_clock_residual, t.max_clock_residual);
        if (all.histogram.size() < t.histogram.size()) all.histogram.resize(t.histogram.size(), 0);
        for (std::size_t k = 0; k < t.histogram.size(); ++k) all.histogram[k] += t.histogram[k];
    }
    const double n = static_cast<double>(all.cycles);
    est.cycles = all.cycles;

    auto per_batch = [&](auto&& stat) {
        std::vector<double> v;
        v.reserve(batches);
        for (const ReplicaTotals& t : replicas) v.push_back(stat(t));
        return v;
    };
    auto mean_of = [&](double ReplicaTotals::*field) {
        return batch_interval(all.*field / n, per_batch([&](const ReplicaTotals& t) {
                                  return t.*field / static_cast<double>(t.cycles);
                              }));
    };

    est.avg_aoi = batch_interval(all.q / all.y,
                                 per_batch([](const ReplicaTotals& t) { return t.q / t.y; }));
    est.peak_aoi = mean_of(&ReplicaTotals::peak);
    est.mean_attempts = mean_of(&ReplicaTotals::attempts);
    est.mean_y = mean_of(&ReplicaTotals::y);
    est.mean_s = mean_of(&ReplicaTotals::s);
    est.mean_final_age = mean_of(&ReplicaTotals::final_age);
    est.mean_x = mean_of(&ReplicaTotals::x);
    est.mean_age_sum = mean_of(&ReplicaTotals::age_sum);
    est.effective_rate = 1.0 / est.mean_y.mean;

    est.renewal_area = all.q;
    est.path_area = all.path_area;
    est.boundary_area = all.boundary;
    est.window_length = all.window;
    est.avg_aoi_path = all.path_area / all.window;
    est.max_clock_residual = all.max_clock_residual;
    est.attempt_histogram = std::move(all.histogram);
    return est;
}

bool ValidationReport::passed() const {
    return std::none_of(rows.begin(), rows.end(),
                        [](const ValidationRow& r) { return r.exact && r.flagged; });
}

const ValidationRow& ValidationReport::row(const std::string& quantity) const {
    for (const auto& r : rows) {
        if (r.quantity == quantity) return r;
    }
    throw std::out_of_range("no validation row named " + quantity);
}

namespace {

ValidationRow compare(std::string name, double analytical, const Interval& sim, bool exact) {
    ValidationRow row{std::move(name), analytical, sim.mean, sim.halfwidth, 0.0, exact, false};
    const double diff = sim.mean - analytical;
    const double se = sim.halfwidth / kNormalQuantile95;
    if (se > 0.0) {
        row.z = diff / se;
    } else if (std::abs(diff) > 1e-9 * std::max(1.0, std::abs(analytical))) {
        // Zero spread (e.g. a deterministic attempt count) with a real mismatch.
        row.z = std::copysign(kInfinity, diff);
    }
    row.flagged = std::abs(row.z) > 3.0;
    return row;
}

}  // namespace

ValidationReport validate(const SystemParams& params, const StoppingPolicy& policy,
                          std::uint64_t num_departures, std::uint64_t seed,
                          std::uint32_t num_batches, unsigned threads) {
    const PolicyMoments m = policy_moments(params, policy);
    SimConfig cfg{params, policy, num_departures, num_batches, seed, 1, threads};
    const SimEstimate est = simulate(cfg);

    ValidationReport report;
    report.policy = describe(policy);
    auto& rows = report.rows;
    rows.push_back(compare("peak_aoi", peak_aoi(params, m), est.peak_aoi, true));
    rows.push_back(compare("avg_aoi", average_aoi(params, m), est.avg_aoi,
                           has_deterministic_attempts(policy)));
    rows.push_back(compare("mean_attempts", m.mean_attempts, est.mean_attempts, true));
    rows.push_back(compare("mean_y", mean_inter_departure(params, m), est.mean_y, true));
    rows.push_back(compare("mean_s", mean_system_time(params, m), est.mean_s, true));
    rows.push_back(compare("mean_final_age", m.mean_final_age, est.mean_final_age, true));
    return report;
}

}  // namespace aoi
