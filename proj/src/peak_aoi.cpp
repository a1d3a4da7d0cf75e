#include "aoi/peak_aoi.hpp"

#include <algorithm>
#include <cmath>

#include "aoi/error.hpp"

namespace aoi {

double g_root_function(const AgeMixtureDensity& dens, double x) {
    if (x < dens.support_start()) {
        throw DomainError("g(x) is defined for x >= m*");
    }
    return x * dens.cdf(x) - dens.partial_expectation(x) - dens.mean();
}

double threshold_cost(const AgeMixtureDensity& dens, double x) {
    if (!(x > dens.support_start())) {
        throw DomainError("threshold cost requires x > m* (Pr(A < x) = 0 otherwise)");
    }
    if (std::isinf(x)) return 2.0 * dens.mean();
    return dens.mean() / dens.cdf(x) + dens.conditional_mean_below(x);
}

double default_threshold_tol(const AgeMixtureDensity& dens) {
    return 1e-10 * std::max(1.0, dens.mean());
}

double fixed_point_threshold(const AgeMixtureDensity& dens, std::optional<double> tol) {
    const double width = tol.value_or(default_threshold_tol(dens));
    if (!(width > 0.0)) throw DomainError("threshold tolerance must be positive");

    const double lo0 = dens.support_start();
    double lo = lo0;
    double step = 1.0 / dens.rate();
    double hi = lo0 + step;
    // g grows like x for large x, so doubling terminates quickly.
    for (int i = 0; g_root_function(dens, hi) <= 0.0; ++i) {
        if (i > 200) throw NumericError("failed to bracket the threshold root");
        lo = hi;
        step *= 2.0;
        hi = lo0 + step;
    }
    while (hi - lo > width) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (g_root_function(dens, mid) > 0.0) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

PeakSolution solve_threshold(const SystemParams& params, std::optional<double> tol) {
    const AgeMixtureDensity dens = build_age_density(params);
    PeakSolution sol;
    sol.w_th = fixed_point_threshold(dens, tol);
    sol.expected_attempts = 1.0 / dens.cdf(sol.w_th);
    sol.accepted_age_mean = dens.conditional_mean_below(sol.w_th);
    sol.peak_aoi = 1.0 / params.lambda() + 2.0 * params.transmission().mean() +
                   sol.expected_attempts * dens.mean() + sol.accepted_age_mean;
    return sol;
}

double peak_aoi_threshold_policy(const SystemParams& params, double w) {
    const AgeMixtureDensity dens = build_age_density(params);
    const double base = 1.0 / params.lambda() + 2.0 * params.transmission().mean();
    if (std::isinf(w) && w > 0.0) return base + 2.0 * dens.mean();
    if (!(w > dens.support_start())) {
        throw DomainError("threshold must exceed m* for the policy to stop");
    }
    return base + threshold_cost(dens, w);
}

}  // namespace aoi
