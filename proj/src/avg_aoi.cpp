#include "aoi/avg_aoi.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "aoi/error.hpp"

namespace aoi {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_wait(double n_w) {
    if (!(std::isfinite(n_w) && n_w >= 0.0)) {
        throw DomainError("waiting steps n_w must be finite and nonnegative");
    }
}

void check_age_threshold(const SystemParams& params, double w) {
    if (!(w > params.sensing().min_value())) {
        throw DomainError("age threshold must exceed m* = min sensing time");
    }
}

std::string fmt_threshold(double w) {
    if (std::isinf(w)) return "inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", w);
    return buf;
}

}  // namespace

void validate_policy(const SystemParams& params, const StoppingPolicy& policy) {
    std::visit(Overloaded{
                   [](const NoThresholdZeroWait&) {},
                   [&](const AgeThreshold& p) { check_age_threshold(params, p.w_th); },
                   [&](const Hybrid& p) {
                       check_wait(p.n_w);
                       check_age_threshold(params, p.w_th);
                   },
                   [](const Pod& p) {
                       check_wait(p.n_w);
                       if (!(p.w_pod > 0.0)) throw DomainError("POD threshold must be positive");
                   },
               },
               policy);
}

std::string describe(const StoppingPolicy& policy) {
    return std::visit(
        Overloaded{
            [](const NoThresholdZeroWait&) { return std::string("no_threshold"); },
            [](const AgeThreshold& p) { return "age_threshold(" + fmt_threshold(p.w_th) + ")"; },
            [](const Hybrid& p) {
                return "hybrid(" + fmt_threshold(p.n_w) + ";" + fmt_threshold(p.w_th) + ")";
            },
            [](const Pod& p) {
                return "pod(" + fmt_threshold(p.n_w) + ";" + fmt_threshold(p.w_pod) + ")";
            },
        },
        policy);
}

double mean_wait(const StoppingPolicy& policy) {
    return std::visit(Overloaded{
                          [](const NoThresholdZeroWait&) { return 0.0; },
                          [](const AgeThreshold&) { return 0.0; },
                          [](const Hybrid& p) { return p.n_w; },
                          [](const Pod& p) { return p.n_w; },
                      },
                      policy);
}

bool has_deterministic_attempts(const StoppingPolicy& policy) {
    return std::visit(Overloaded{
                          [](const NoThresholdZeroWait&) { return true; },
                          [](const AgeThreshold& p) { return std::isinf(p.w_th); },
                          [](const Hybrid& p) {
                              return std::isinf(p.w_th) && p.n_w == std::floor(p.n_w);
                          },
                          [](const Pod& p) {
                              return std::isinf(p.w_pod) && p.n_w == std::floor(p.n_w);
                          },
                      },
                      policy);
}

PolicyMoments policy_moments(const SystemParams& params, const StoppingPolicy& policy) {
    validate_policy(params, policy);
    const AgeMixtureDensity dens = build_age_density(params);
    const double lambda = params.lambda();

    auto age_rule = [&](double n_w, double w) -> PolicyMoments {
        if (std::isinf(w)) return {n_w + 1.0, dens.mean()};
        return {n_w + 1.0 / dens.cdf(w), dens.conditional_mean_below(w)};
    };

    return std::visit(
        Overloaded{
            [&](const NoThresholdZeroWait&) { return PolicyMoments{1.0, dens.mean()}; },
            [&](const AgeThreshold& p) { return age_rule(0.0, p.w_th); },
            [&](const Hybrid& p) { return age_rule(p.n_w, p.w_th); },
            [&](const Pod& p) -> PolicyMoments {
                if (std::isinf(p.w_pod)) return {p.n_w + 1.0, dens.mean()};
                const double accept = -std::expm1(-lambda * p.w_pod);
                const double outage =
                    1.0 / lambda - p.w_pod * std::exp(-lambda * p.w_pod) / accept;
                return {p.n_w + 1.0 / accept, params.sensing_moments().mean + outage};
            },
        },
        policy);
}

double mean_inter_departure(const SystemParams& params, const PolicyMoments& m) {
    return 1.0 / params.lambda() + params.transmission().mean() +
           m.mean_attempts * params.mean_age();
}

double mean_system_time(const SystemParams& params, const PolicyMoments& m) {
    return m.mean_final_age + params.transmission().mean();
}

double peak_aoi(const SystemParams& params, const PolicyMoments& m) {
    return mean_inter_departure(params, m) + mean_system_time(params, m);
}

double h1_function(const SystemParams& params, double x) {
    const double l = params.lambda();
    const double inv_l2 = 1.0 / (l * l);
    const Moments& c = params.sensing_moments();
    const TransmissionModel& t = params.transmission();
    const double num = inv_l2 + t.variance() + x * (c.variance + inv_l2);
    const double den = 2.0 * (1.0 / l + t.mean() + x * (c.mean + 1.0 / l));
    return num / den;
}

double h_function(const SystemParams& params, double x) {
    const double l = params.lambda();
    return h1_function(params, x) + 0.5 * x * (params.sensing_moments().mean + 1.0 / l) +
           0.5 / l + 1.5 * params.transmission().mean();
}

double average_aoi(const SystemParams& params, const PolicyMoments& m) {
    if (!(m.mean_attempts >= 1.0) || !(m.mean_final_age > 0.0)) {
        throw DomainError("policy moments need E[n] >= 1 and E[C_n + I_n] > 0");
    }
    return h_function(params, m.mean_attempts) + m.mean_final_age;
}

double k_criterion(const SystemParams& params) {
    const double l = params.lambda();
    const double inv_l2 = 1.0 / (l * l);
    const Moments& c = params.sensing_moments();
    const TransmissionModel& t = params.transmission();
    return (t.variance() + inv_l2) * (c.mean + 1.0 / l) -
           (c.variance + inv_l2) * (t.mean() + 1.0 / l);
}

double x_star(const SystemParams& params) {
    const double K = k_criterion(params);
    if (K <= 0.0) return 0.0;
    const double l = params.lambda();
    const double root = std::sqrt(K / (params.sensing_moments().mean + 1.0 / l));
    return std::max(root - 1.0 / l - params.transmission().mean(), 0.0);
}

double h_minimizer(const SystemParams& params) {
    return x_star(params) / params.mean_age();
}

bool initial_waiting_suggested(const SystemParams& params) { return x_star(params) > 0.0; }

std::vector<double> SearchSpec::default_waits() {
    std::vector<double> w(21);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = static_cast<double>(i);
    return w;
}

std::pair<double, double> default_bracket(const SystemParams& params, PolicyFamily family) {
    if (family == PolicyFamily::Hybrid) {
        const double m_star = params.sensing().min_value();
        return {m_star + 1e-6, m_star + 50.0 * params.mean_age()};
    }
    return {1e-6 / params.lambda(), 50.0 / params.lambda()};
}

namespace {

StoppingPolicy make_policy(PolicyFamily family, double n_w, double w) {
    if (family == PolicyFamily::Hybrid) return Hybrid{n_w, w};
    return Pod{n_w, w};
}

struct Candidate {
    double threshold;
    double value;
};

// Best threshold for one n_w.
Candidate optimize_threshold(const SystemParams& params, PolicyFamily family, double n_w,
                             double lo, double hi, const SearchSpec& spec, bool& unimodal) {
    auto objective = [&](double w) {
        return average_aoi(params, policy_moments(params, make_policy(family, n_w, w)));
    };
    if (lo == hi) return {lo, objective(lo)};

    const std::size_t n = std::max<std::size_t>(spec.scan_points, 3);
    std::vector<double> xs(n), vs(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
        vs[i] = objective(xs[i]);
    }
    const auto best_it = std::min_element(vs.begin(), vs.end());
    const std::size_t best = static_cast<std::size_t>(best_it - vs.begin());

    // Count descending-to-ascending turns; plateaus do not count.
    std::size_t turns = 0;
    int prev_dir = 0;
    for (std::size_t i = 1; i < n; ++i) {
        const int dir = vs[i] < vs[i - 1] ? -1 : (vs[i] > vs[i - 1] ? 1 : 0);
        if (dir == 0) continue;
        if (prev_dir == -1 && dir == 1) ++turns;
        prev_dir = dir;
    }
    const bool single = turns <= 1;
    unimodal = unimodal && single;

    double a = lo, b = hi;
    if (!single) {
        a = xs[best == 0 ? 0 : best - 1];
        b = xs[std::min(best + 1, n - 1)];
    }
    const double tol = spec.x_tol * std::max(1.0, params.mean_age());
    const double refined = golden_section_minimize(objective, a, b, tol);
    const double refined_value = objective(refined);
    if (refined_value < vs[best]) return {refined, refined_value};
    return {xs[best], vs[best]};
}

}  // namespace

OptimizedPolicy optimize_policy(const SystemParams& params, PolicyFamily family,
                                const SearchSpec& spec) {
    if (spec.waits.empty()) throw DomainError("search space has no n_w candidates");
    const auto [def_lo, def_hi] = default_bracket(params, family);
    const double lo = spec.lower.value_or(def_lo);
    const double hi = spec.upper.value_or(def_hi);
    if (!(lo <= hi)) throw DomainError("empty threshold bracket");
    if (lo != hi && std::isinf(hi)) {
        throw DomainError("threshold bracket must be finite unless it is a single point");
    }
    validate_policy(params, make_policy(family, 0.0, lo));

    std::vector<double> waits = spec.waits;
    std::sort(waits.begin(), waits.end());
    waits.erase(std::unique(waits.begin(), waits.end()), waits.end());

    OptimizedPolicy result{make_policy(family, 0.0, kInfinity), kInfinity, true};
    bool have = false;
    auto consider = [&](double n_w, double w, double value) {
        // Strict improvement keeps the lexicographically smallest (n_w, w).
        if (!have || value < result.value) {
            result.policy = make_policy(family, n_w, w);
            result.value = value;
            have = true;
        }
    };

    for (double n_w : waits) {
        check_wait(n_w);
        const Candidate c = optimize_threshold(params, family, n_w, lo, hi, spec, result.unimodal);
        const bool also_inf = spec.include_infinite_threshold && !std::isinf(c.threshold);
        const double inf_value =
            also_inf ? average_aoi(params, policy_moments(params, make_policy(family, n_w, kInfinity)))
                     : kInfinity;
        if (also_inf && inf_value < c.value) {
            consider(n_w, kInfinity, inf_value);
        } else {
            consider(n_w, c.threshold, c.value);
        }
    }
    return result;
}

}  // namespace aoi
