#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aoi/avg_aoi.hpp"
#include "aoi/distributions.hpp"
#include "aoi/rng.hpp"

namespace aoi {

inline constexpr std::uint64_t kDefaultAttemptCap = 1'000'000'000;

struct SimConfig {
    SystemParams params;
    StoppingPolicy policy = NoThresholdZeroWait{};
    std::uint64_t num_departures = 100'000;
    /// Independent replicas; each one is a batch for the confidence intervals.
    std::uint32_t num_batches = 32;
    std::uint64_t seed = 1;
    /// Cycles dropped at the start of every replica. The first cycle has no
    /// previous delivery and uses S_0 = 0.
    std::uint64_t discard_first_cycles = 1;
    unsigned threads = 1;
    std::uint64_t max_attempts = kDefaultAttemptCap;

    void validate() const;
};

/// One renewal cycle: from a delivery to the next one.
struct CycleRecord {
    double i0 = 0.0;             ///< outage before the first sensing
    std::uint64_t attempts = 0;  ///< realized stopping index n
    std::uint64_t waits = 0;     ///< unconditional discards drawn for this cycle
    double age_sum = 0.0;        ///< sum over k <= n of A_k = C_k + I_k
    double final_age = 0.0;      ///< A_n
    double final_outage = 0.0;   ///< I_n
    double service = 0.0;        ///< T
    double y = 0.0;              ///< inter-departure time, i0 + age_sum + service
    double s = 0.0;              ///< system time of the delivered packet, final_age + service
    double s_prev = 0.0;         ///< system time of the previous delivery
    double q = 0.0;              ///< ((s_prev + y)^2 - s^2) / 2
    double peak = 0.0;           ///< AoI just before this delivery, s_prev + y
    double x = 0.0;              ///< inter-generation time of delivered packets, y + s_prev - s
};

/// Simulates one cycle. The policy sees (k, A_k, I_k) when the energy
/// arrival that ends I_k occurs. Throws NumericError past max_attempts.
CycleRecord run_cycle(const SystemParams& params, const StoppingPolicy& policy, double s_prev,
                      Rng& rng, std::uint64_t max_attempts = kDefaultAttemptCap);

struct Interval {
    double mean = 0.0;
    double halfwidth = 0.0;  ///< nominal 95% batch-means halfwidth
};

struct SimEstimate {
    Interval avg_aoi;  ///< sum q / sum y
    Interval peak_aoi;
    Interval mean_attempts;
    Interval mean_y;
    Interval mean_s;
    Interval mean_final_age;
    Interval mean_x;
    Interval mean_age_sum;
    double effective_rate = 0.0;  ///< 1 / mean_y

    std::uint64_t cycles = 0;
    std::uint32_t batches = 0;

    /// Time-average of the sawtooth path integrated between the first and
    /// last measured deliveries of each replica, using absolute timestamps.
    double avg_aoi_path = 0.0;
    double renewal_area = 0.0;   ///< sum of q
    double path_area = 0.0;      ///< integral of AoI over the measurement windows
    double boundary_area = 0.0;  ///< sum over replicas of (S_first_prev^2 - S_last^2) / 2
    double window_length = 0.0;  ///< total measured time, equals sum of y up to rounding
    /// Largest |clock difference - y| / y seen over all measured cycles.
    double max_clock_residual = 0.0;

    /// Attempt-count histogram over measured cycles (index = attempts).
    std::vector<std::uint64_t> attempt_histogram;
};

SimEstimate simulate(const SimConfig& config);

struct ValidationRow {
    std::string quantity;
    double analytical = 0.0;
    double simulated = 0.0;
    double halfwidth = 0.0;
    double z = 0.0;
    bool exact = true;  ///< the closed form is exact for this policy
    bool flagged = false;  ///< |z| > 3
};

struct ValidationReport {
    std::string policy;
    std::vector<ValidationRow> rows;

    /// False if a quantity whose formula is exact deviates by |z| > 3.
    bool passed() const;
    const ValidationRow& row(const std::string& quantity) const;
};

ValidationReport validate(const SystemParams& params, const StoppingPolicy& policy,
                          std::uint64_t num_departures, std::uint64_t seed,
                          std::uint32_t num_batches = 32, unsigned threads = 1);

}  // namespace aoi
