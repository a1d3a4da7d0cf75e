#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "aoi/distributions.hpp"

namespace aoi {

// Renewal stopping rules. Every rule restarts after a delivery and sees only
// the current cycle's observations (attempt index, A_k = C_k + I_k, I_k).

/// Transmit the first packet sensed.
struct NoThresholdZeroWait {
    friend bool operator==(const NoThresholdZeroWait&, const NoThresholdZeroWait&) = default;
};

/// Transmit the first packet with A_k < w_th.
struct AgeThreshold {
    double w_th = kInfinity;
    friend bool operator==(const AgeThreshold&, const AgeThreshold&) = default;
};

/// Discard the first n_w packets unconditionally, then apply A_k < w_th.
/// A fractional n_w waits floor or ceil(n_w) steps, randomized per cycle
/// so that the mean wait is n_w.
struct Hybrid {
    double n_w = 0.0;
    double w_th = kInfinity;
    friend bool operator==(const Hybrid&, const Hybrid&) = default;
};

/// Power-outage based discarding: after n_w unconditional discards, transmit
/// the first packet whose outage time satisfies I_k < w_pod.
struct Pod {
    double n_w = 0.0;
    double w_pod = kInfinity;
    friend bool operator==(const Pod&, const Pod&) = default;
};

using StoppingPolicy = std::variant<NoThresholdZeroWait, AgeThreshold, Hybrid, Pod>;

/// Throws DomainError if the policy violates its parameter constraints.
void validate_policy(const SystemParams& params, const StoppingPolicy& policy);

std::string describe(const StoppingPolicy& policy);

/// Mean wait n_w of a policy (0 for the pure threshold rules).
double mean_wait(const StoppingPolicy& policy);

/// True when the number of attempts per cycle is deterministic.
bool has_deterministic_attempts(const StoppingPolicy& policy);

/// The two statistics of a stopping rule that the AoI formulas depend on.
struct PolicyMoments {
    double mean_attempts = 1.0;   ///< E[n]
    double mean_final_age = 0.0;  ///< E[C_n + I_n]
};

PolicyMoments policy_moments(const SystemParams& params, const StoppingPolicy& policy);

/// E[Y] = 1/lambda + E[T] + E[n] E[A] (Wald).
double mean_inter_departure(const SystemParams& params, const PolicyMoments& m);
/// E[S] = E[C_n + I_n] + E[T].
double mean_system_time(const SystemParams& params, const PolicyMoments& m);
/// E[peak AoI] = E[Y] + E[S]; exact for every stopping rule.
double peak_aoi(const SystemParams& params, const PolicyMoments& m);

/// Closed-form average AoI, H(E[n]) + E[C_n + I_n]. The second moment of Y
/// enters through E[n]^2 only, which is exact when n is deterministic.
double average_aoi(const SystemParams& params, const PolicyMoments& m);

/// H1(x) = (1/l^2 + Var T + x (Var C + 1/l^2)) / (2 (1/l + E[T] + x (E[C] + 1/l))).
double h1_function(const SystemParams& params, double x);
/// H(x) = H1(x) + x/2 (E[C] + 1/l) + 1/(2l) + 3/2 E[T].
double h_function(const SystemParams& params, double x);

/// K = (Var T + 1/l^2)(E[C] + 1/l) - (Var C + 1/l^2)(E[T] + 1/l).
/// K < 0: H is concave increasing; K >= 0: H1 is convex decreasing.
double k_criterion(const SystemParams& params);

/// Waiting heuristic from minimizing H alone (final-age term ignored):
/// max{sqrt(K / (E[C] + 1/l)) - 1/l - E[T], 0}, in time units.
double x_star(const SystemParams& params);

/// Minimizer of H over E[n] >= 0 (attempt units): x_star / (E[C] + 1/l).
/// x_star itself is the corresponding excess of E[Y] over 1/l + E[T].
double h_minimizer(const SystemParams& params);

/// True when x_star > 0, i.e. waiting regardless of the observed age helps H.
bool initial_waiting_suggested(const SystemParams& params);

enum class PolicyFamily { Hybrid, Pod };

struct SearchSpec {
    /// Candidate n_w values; defaults to 0..20.
    std::vector<double> waits = default_waits();
    /// Threshold bracket; family defaults when unset. lower == upper
    /// evaluates that single threshold (kInfinity allowed).
    std::optional<double> lower;
    std::optional<double> upper;
    std::size_t scan_points = 256;
    /// Golden-section stops when the bracket is narrower than
    /// x_tol * max(1, E[A]).
    double x_tol = 1e-9;
    /// Also evaluate the threshold-free corner w = inf for every n_w.
    bool include_infinite_threshold = true;

    static std::vector<double> default_waits();
};

struct OptimizedPolicy {
    StoppingPolicy policy;
    double value = 0.0;
    /// False if any threshold scan showed more than one local minimum.
    bool unimodal = true;
};

/// Threshold bracket used when SearchSpec leaves it unset.
std::pair<double, double> default_bracket(const SystemParams& params, PolicyFamily family);

/// Minimize average_aoi over n_w in spec.waits and the threshold in the
/// bracket: 256-point scan, then golden section (on the whole bracket when
/// the scan is unimodal, otherwise around the scan argmin). Ties keep the
/// lexicographically smallest (n_w, threshold).
OptimizedPolicy optimize_policy(const SystemParams& params, PolicyFamily family,
                                const SearchSpec& spec = {});

/// Golden-section minimization of a unimodal function on [lo, hi].
template <class F>
double golden_section_minimize(F&& f, double lo, double hi, double tol) {
    constexpr double kInvPhi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kInvPhi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvPhi * (b - a);
            fd = f(d);
        }
    }
    return fc <= fd ? c : d;
}

}  // namespace aoi
