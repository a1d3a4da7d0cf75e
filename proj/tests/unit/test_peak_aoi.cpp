#include <cmath>
#include <random>

#include "aoi/avg_aoi.hpp"
#include "aoi/error.hpp"
#include "aoi/peak_aoi.hpp"
#include "doctest.h"
#include "support/oracles.hpp"

using namespace aoi;

namespace {

SystemParams make_params(double lambda, std::vector<Atom> atoms, double t_mean = 1.0,
                         double t_var = 0.0) {
    return SystemParams(lambda, DiscreteDist(std::move(atoms)), TransmissionModel(t_mean, t_var));
}

const SystemParams kExp1 = make_params(1.0, {{0.0, 1.0}});
// Root of x + e^{-x} = 2, by bisection to 1e-15 (scipy brentq agrees).
constexpr double kExpRoot = 1.8414056604369606;

/// g from quadrature of the raw mixture, independent of the closed forms.
double oracle_g(const std::vector<Atom>& atoms, double lambda, double x) {
    double mean_a = 1.0 / lambda;
    for (const auto& a : atoms) mean_a += a.prob * a.value;
    return x * oracle::quad_cdf(atoms, lambda, x) - oracle::quad_partial(atoms, lambda, x) - mean_a;
}

}  // namespace

TEST_CASE("g on the exponential case") {
    const AgeMixtureDensity d = build_age_density(kExp1);
    CHECK(g_root_function(d, 0.0) == doctest::Approx(-1.0).epsilon(1e-15));
    for (double x : {0.1, 1.0, kExpRoot, 3.0, 10.0}) {
        CHECK(g_root_function(d, x) == doctest::Approx(x - 2.0 + std::exp(-x)).epsilon(1e-13));
    }
    CHECK(std::abs(oracle::bisect([](double x) { return x + std::exp(-x) - 2.0; }, 0.0, 5.0) -
                   kExpRoot) <= 1e-14);
    CHECK(std::abs(g_root_function(d, 1.84141)) <= 1e-5);
    CHECK_THROWS_AS(g_root_function(build_age_density(make_params(1.0, {{2.0, 1.0}})), 1.0),
                    DomainError);
}

TEST_CASE("g crosses zero once for the two-point example") {
    const AgeMixtureDensity d = build_age_density(make_params(10.0, {{1.0, 0.8}, {40.0, 0.2}}));
    CHECK(g_root_function(d, 1.0) == doctest::Approx(-d.mean()));
    const auto g = [&](double x) { return g_root_function(d, x); };
    CHECK(oracle::sign_changes(g, 1.0, 200.0, 199'001) == 1);
}

TEST_CASE("threshold cost") {
    const AgeMixtureDensity d = build_age_density(make_params(10.0, {{1.0, 0.8}, {40.0, 0.2}}));
    CHECK(std::abs(threshold_cost(d, 1e9) / (2.0 * d.mean()) - 1.0) <= 1e-6);
    CHECK(threshold_cost(d, kInfinity) == 2.0 * d.mean());
    CHECK_THROWS_AS(threshold_cost(d, 1.0), DomainError);
    CHECK_THROWS_AS(threshold_cost(d, 0.5), DomainError);
    // Blows up approaching m*.
    CHECK(threshold_cost(d, 1.0 + 1e-9) > 1e6);

    const AgeMixtureDensity e = build_age_density(kExp1);
    // E[A]/F + E[A | A < x] = 1.188492 + 0.652919 at x = 1.84141.
    CHECK(std::abs(threshold_cost(e, 1.84141) - 1.84141) <= 1e-4);

    // c_x is minimized at its fixed point; plateaus between atoms are flat
    // to below rounding, hence the relative slack.
    for (const SystemParams& p :
         {kExp1, make_params(10.0, {{1.0, 0.8}, {40.0, 0.2}}), make_params(1.0, {{1.0, 0.8}, {21.0, 0.2}})}) {
        const AgeMixtureDensity dd = build_age_density(p);
        const double w = fixed_point_threshold(dd);
        const double c_w = threshold_cost(dd, w);
        CHECK(std::abs(c_w - w) <= 1e-8 * std::max(1.0, dd.mean()));
        for (int i = 1; i <= 5000; ++i) {
            const double x = dd.support_start() + 50.0 * dd.mean() * i / 5000.0;
            CHECK(threshold_cost(dd, x) >= c_w * (1.0 - 1e-12));
        }
    }
}

TEST_CASE("solve_threshold on the exponential case") {
    const PeakSolution s = solve_threshold(kExp1, 1e-8);
    CHECK(std::abs(s.w_th - 1.84141) <= 1e-5);
    CHECK(std::abs(s.w_th - kExpRoot) <= 1e-8);
    CHECK(s.peak_aoi == doctest::Approx(1.0 + 2.0 * 1.0 + s.w_th).epsilon(1e-8));
    CHECK(s.expected_attempts == doctest::Approx(1.0 / (1.0 - std::exp(-s.w_th))));
    CHECK(s.accepted_age_mean < s.w_th);
    CHECK_THROWS_AS(fixed_point_threshold(build_age_density(kExp1), 0.0), DomainError);
}

TEST_CASE("solve_threshold matches a quadrature bisection oracle") {
    const std::vector<Atom> atoms{{1.0, 0.8}, {40.0, 0.2}};
    for (double lambda : {1.0, 5.0, 10.0, 20.0}) {
        const double w = solve_threshold(make_params(lambda, atoms)).w_th;
        const double ref = oracle::bisect([&](double x) { return oracle_g(atoms, lambda, x); },
                                          1.0, 200.0, 1e-9);
        CHECK(std::abs(w - ref) <= 1e-4);
    }
}

TEST_CASE("peak AoI of threshold policies") {
    const SystemParams p = make_params(10.0, {{1.0, 0.8}, {21.0, 0.2}}, 1.0, 1.0);
    CHECK(std::abs(peak_aoi_threshold_policy(p, kInfinity) - 12.3) <= 1e-9);
    CHECK_THROWS_AS(peak_aoi_threshold_policy(p, 1.0), DomainError);
    CHECK_THROWS_AS(peak_aoi_threshold_policy(p, 0.0), DomainError);

    // Var(T) never enters.
    for (double v : {0.0, 5.0, 500.0}) {
        const SystemParams q = p.with_transmission(TransmissionModel(1.0, v));
        CHECK(peak_aoi_threshold_policy(q, kInfinity) == peak_aoi_threshold_policy(p, kInfinity));
        CHECK(peak_aoi_threshold_policy(q, 7.0) == peak_aoi_threshold_policy(p, 7.0));
        CHECK(solve_threshold(q).peak_aoi == solve_threshold(p).peak_aoi);
    }

    // Grid-minimization oracle.
    const PeakSolution s = solve_threshold(p);
    const double at_opt = peak_aoi_threshold_policy(p, s.w_th);
    CHECK(at_opt == doctest::Approx(s.peak_aoi).epsilon(1e-12));
    const double m = p.sensing().min_value();
    for (int i = 1; i <= 1000; ++i) {
        const double w = m + 50.0 * p.mean_age() * i / 1000.0;
        CHECK(at_opt <= peak_aoi_threshold_policy(p, w) + 1e-12);
    }
}

TEST_CASE("peak AoI properties over random parameter draws") {
    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> lam(0.05, 30.0), tmean(0.0, 5.0);
    for (int draw = 0; draw < 30; ++draw) {
        const auto atoms = oracle::random_two_point(gen);
        const SystemParams p = make_params(lam(gen), atoms, tmean(gen), 1.0 + draw);
        const AgeMixtureDensity d = build_age_density(p);
        const double tol = default_threshold_tol(d);
        const PeakSolution s = solve_threshold(p);
        CAPTURE(draw);

        const double m = d.support_start();
        const auto g = [&](double x) { return g_root_function(d, x); };
        CHECK(oracle::sign_changes(g, m, m + 50.0 * d.mean(), 10'000) == 1);
        CHECK(s.w_th > m);
        CHECK(std::abs(s.w_th - threshold_cost(d, s.w_th)) <= 10.0 * tol);
        const double identity = 1.0 / p.lambda() + 2.0 * p.transmission().mean() + s.w_th;
        CHECK(std::abs(s.peak_aoi - identity) <= 10.0 * tol);

        std::uniform_real_distribution<double> wdist(m + 1e-9, m + 50.0 * d.mean());
        for (int i = 0; i < 1000; ++i) {
            CHECK(s.peak_aoi <= peak_aoi_threshold_policy(p, wdist(gen)) + 1e-9);
        }
        CHECK(s.peak_aoi <= peak_aoi_threshold_policy(p, kInfinity) * (1.0 + 1e-12));
    }
}

TEST_CASE("gain of the optimal threshold grows with lambda") {
    const SystemParams base = make_params(1.0, {{1.0, 0.8}, {21.0, 0.2}}, 1.0, 1.0);
    double prev_gap = -1.0;
    for (double lambda : {0.2, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0}) {
        const SystemParams p = base.with_lambda(lambda);
        const double gap = peak_aoi_threshold_policy(p, kInfinity) - solve_threshold(p).peak_aoi;
        CHECK(gap >= 0.0);
        CHECK(gap >= prev_gap - 1e-9);
        prev_gap = gap;
    }
}

TEST_CASE("sensing variance lowers the optimal peak AoI") {
    const SystemParams base = make_params(10.0, {{1.0, 1.0}}, 1.0, 0.0);
    double prev = kInfinity;
    for (double theta : {1.0, 5.0, 10.0, 20.0, 30.0, 50.0}) {
        const SystemParams p = base.with_sensing(DiscreteDist::theta_family(theta));
        const double opt = solve_threshold(p).peak_aoi;
        CHECK(opt <= prev + 1e-9);
        CHECK(std::abs(peak_aoi_threshold_policy(p, kInfinity) - 12.3) <= 1e-9);
        prev = opt;
    }
}
