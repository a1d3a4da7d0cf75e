#include "aoi/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "aoi/error.hpp"
#include "aoi/rng.hpp"

namespace aoi {

namespace {

constexpr double kProbSumTol = 1e-12;

void require(bool ok, const std::string& what) {
    if (!ok) throw DomainError(what);
}

}  // namespace

DiscreteDist::DiscreteDist(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
    require(!atoms_.empty(), "discrete distribution needs at least one atom");
    std::sort(atoms_.begin(), atoms_.end(),
              [](const Atom& a, const Atom& b) { return a.value < b.value; });
    double total = 0.0;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        const Atom& a = atoms_[i];
        require(std::isfinite(a.value) && a.value >= 0.0,
                "atom values must be finite and nonnegative");
        require(std::isfinite(a.prob) && a.prob > 0.0,
                "atom probabilities must be strictly positive");
        require(i == 0 || atoms_[i - 1].value < a.value, "atom values must be distinct");
        total += a.prob;
    }
    require(std::abs(total - 1.0) <= kProbSumTol, "atom probabilities must sum to 1");
}

DiscreteDist DiscreteDist::point(double value) { return DiscreteDist({{value, 1.0}}); }

DiscreteDist DiscreteDist::theta_family(double theta) {
    require(theta > 0.0 && std::isfinite(theta), "theta must be positive");
    const double p2 = 4.0 / (9.0 + theta);
    return DiscreteDist({{1.0, 1.0 - p2}, {10.0 + theta, p2}});
}

Moments moments(const DiscreteDist& dist) {
    Moments m;
    for (const Atom& a : dist.atoms()) {
        m.mean += a.prob * a.value;
        m.second_moment += a.prob * a.value * a.value;
    }
    // Centered sum avoids cancellation in E[C^2] - E[C]^2.
    for (const Atom& a : dist.atoms()) {
        const double d = a.value - m.mean;
        m.variance += a.prob * d * d;
    }
    return m;
}

namespace {

DiscreteDist two_point_sampler(double mean, double variance) {
    if (variance == 0.0) return DiscreteDist::point(mean);
    const double second = variance + mean * mean;
    const double p = mean * mean / second;
    return DiscreteDist({{0.0, 1.0 - p}, {second / mean, p}});
}

}  // namespace

TransmissionModel::TransmissionModel(double mean, double variance)
    : mean_(mean), variance_(variance), sampler_(DiscreteDist::point(0.0)) {
    require(std::isfinite(mean) && mean >= 0.0, "transmission mean must be nonnegative");
    require(std::isfinite(variance) && variance >= 0.0,
            "transmission variance must be nonnegative");
    require(mean > 0.0 || variance == 0.0,
            "a zero-mean transmission time must have zero variance");
    sampler_ = two_point_sampler(mean, variance);
}

SystemParams::SystemParams(double lambda, DiscreteDist sensing, TransmissionModel transmission)
    : lambda_(lambda),
      sensing_(std::move(sensing)),
      transmission_(std::move(transmission)),
      sensing_moments_(moments(sensing_)) {
    require(std::isfinite(lambda) && lambda > 0.0, "energy arrival rate must be positive");
}

SystemParams SystemParams::with_lambda(double lambda) const {
    return SystemParams(lambda, sensing_, transmission_);
}

SystemParams SystemParams::with_sensing(DiscreteDist sensing) const {
    return SystemParams(lambda_, std::move(sensing), transmission_);
}

SystemParams SystemParams::with_transmission(TransmissionModel transmission) const {
    return SystemParams(lambda_, sensing_, std::move(transmission));
}

AgeMixtureDensity::AgeMixtureDensity(double rate, std::vector<Component> components)
    : rate_(rate), components_(std::move(components)) {
    require(rate > 0.0, "mixture rate must be positive");
    require(!components_.empty(), "mixture needs at least one component");
    for (std::size_t i = 1; i < components_.size(); ++i) {
        require(components_[i - 1].shift < components_[i].shift,
                "mixture shifts must be strictly increasing");
    }
}

double AgeMixtureDensity::mean() const noexcept {
    double m = 0.0;
    for (const auto& c : components_) m += c.weight * (c.shift + 1.0 / rate_);
    return m;
}

double AgeMixtureDensity::pdf(double x) const noexcept {
    double f = 0.0;
    for (const auto& c : components_) {
        if (x < c.shift) break;
        f += c.weight * rate_ * std::exp(-rate_ * (x - c.shift));
    }
    return f;
}

double AgeMixtureDensity::cdf(double x) const noexcept {
    double F = 0.0;
    for (const auto& c : components_) {
        if (x < c.shift) break;
        F += c.weight * -std::expm1(-rate_ * (x - c.shift));
    }
    return F;
}

double AgeMixtureDensity::partial_expectation(double x) const noexcept {
    // With t = x - m: m + 1/r - (x + 1/r) e^{-rt} = (m + 1/r)(1 - e^{-rt}) - t e^{-rt}.
    double P = 0.0;
    for (const auto& c : components_) {
        if (x < c.shift) break;
        const double t = x - c.shift;
        const double decay = std::exp(-rate_ * t);
        P += c.weight * ((c.shift + 1.0 / rate_) * -std::expm1(-rate_ * t) - t * decay);
    }
    return P;
}

double AgeMixtureDensity::conditional_mean_below(double x) const {
    if (!(x > support_start())) {
        throw DomainError("conditioning event {A < x} is empty: x must exceed m*");
    }
    if (std::isinf(x)) return mean();
    return partial_expectation(x) / cdf(x);
}

AgeMixtureDensity build_age_density(const SystemParams& params) {
    std::vector<AgeMixtureDensity::Component> comps;
    comps.reserve(params.sensing().atoms().size());
    for (const Atom& a : params.sensing().atoms()) comps.push_back({a.prob, a.value});
    return AgeMixtureDensity(params.lambda(), std::move(comps));
}

namespace {

double sample_discrete(const DiscreteDist& dist, Rng& rng) {
    const auto& atoms = dist.atoms();
    if (atoms.size() == 1) return atoms.front().value;
    const double u = rng.uniform_open0();
    double cum = 0.0;
    for (const Atom& a : atoms) {
        cum += a.prob;
        if (u <= cum) return a.value;
    }
    return atoms.back().value;
}

}  // namespace

double sample_sensing(const SystemParams& params, Rng& rng) {
    return sample_discrete(params.sensing(), rng);
}

double sample_outage(const SystemParams& params, Rng& rng) {
    return rng.exponential(params.lambda());
}

double sample_transmission(const SystemParams& params, Rng& rng) {
    return sample_discrete(params.transmission().sampler_atoms(), rng);
}

}  // namespace aoi
