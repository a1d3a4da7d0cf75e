#pragma once

#include <optional>

#include "aoi/distributions.hpp"

namespace aoi {

/// Optimal age-threshold policy for average peak AoI.
struct PeakSolution {
    double w_th = 0.0;               ///< accept the first packet with A < w_th
    double peak_aoi = 0.0;           ///< minimized E[peak AoI]
    double expected_attempts = 0.0;  ///< E[n] = 1 / Pr(A < w_th)
    double accepted_age_mean = 0.0;  ///< E[A | A < w_th]
};

/// g(x) = x Pr(A < x) - int_0^x a f_A(a) da - E[A], defined for x >= m*.
/// Nondecreasing with g(m*) = -E[A]; its unique zero is the optimal threshold.
double g_root_function(const AgeMixtureDensity& dens, double x);

/// Expected cost of continuing the search until A < x:
/// c_x = E[A] / Pr(A < x) + E[A | A < x]. Requires x > m*.
double threshold_cost(const AgeMixtureDensity& dens, double x);

/// Default bisection width, 1e-10 * max(1, E[A]).
double default_threshold_tol(const AgeMixtureDensity& dens);

/// Root of g on (m*, inf) by bracket doubling from m* + 1/rate, then
/// bisection to width `tol`.
double fixed_point_threshold(const AgeMixtureDensity& dens, std::optional<double> tol = {});

PeakSolution solve_threshold(const SystemParams& params, std::optional<double> tol = {});

/// E[peak AoI] of the rule "accept the first A < w" (w = kInfinity accepts
/// every packet). Wald-exact: 1/lambda + 2E[T] + E[n] E[A] + E[A | A < w].
double peak_aoi_threshold_policy(const SystemParams& params, double w);

}  // namespace aoi
