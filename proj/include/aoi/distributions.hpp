#pragma once

#include <limits>
#include <span>
#include <vector>

namespace aoi {

class Rng;

/// One support point of a finite distribution.
struct Atom {
    double value = 0.0;
    double prob = 0.0;

    friend bool operator==(const Atom&, const Atom&) = default;
};

struct Moments {
    double mean = 0.0;
    double second_moment = 0.0;
    double variance = 0.0;
};

/// Finite discrete distribution on [0, inf). Atoms are stored sorted by
/// value; probabilities are strictly positive and sum to one (1e-12).
class DiscreteDist {
public:
    explicit DiscreteDist(std::vector<Atom> atoms);

    /// Degenerate distribution at `value`.
    static DiscreteDist point(double value);

    /// Two-point sensing law used throughout the experiments:
    /// m1 = 1, m2 = 10 + theta, p2 = 4 / (9 + theta), which keeps the mean at 5.
    static DiscreteDist theta_family(double theta);

    const std::vector<Atom>& atoms() const noexcept { return atoms_; }
    double min_value() const noexcept { return atoms_.front().value; }
    double max_value() const noexcept { return atoms_.back().value; }

    friend bool operator==(const DiscreteDist&, const DiscreteDist&) = default;

private:
    std::vector<Atom> atoms_;
};

Moments moments(const DiscreteDist& dist);

/// Transmission time T. Only E[T] and Var(T) enter the analytics; samples
/// come from the zero-anchored two-point law {(0, 1-p), (b, p)} with
/// b = (var + mean^2) / mean and p = mean^2 / (var + mean^2).
class TransmissionModel {
public:
    TransmissionModel(double mean, double variance);

    double mean() const noexcept { return mean_; }
    double variance() const noexcept { return variance_; }
    double second_moment() const noexcept { return variance_ + mean_ * mean_; }
    const DiscreteDist& sampler_atoms() const noexcept { return sampler_; }

    friend bool operator==(const TransmissionModel&, const TransmissionModel&) = default;

private:
    double mean_;
    double variance_;
    DiscreteDist sampler_;
};

/// Energy arrival rate, sensing-time law C and transmission model T.
/// The outage time I after each operation is Exp(lambda).
class SystemParams {
public:
    SystemParams(double lambda, DiscreteDist sensing, TransmissionModel transmission);

    double lambda() const noexcept { return lambda_; }
    const DiscreteDist& sensing() const noexcept { return sensing_; }
    const TransmissionModel& transmission() const noexcept { return transmission_; }

    const Moments& sensing_moments() const noexcept { return sensing_moments_; }
    /// E[A] = E[C] + 1/lambda.
    double mean_age() const noexcept { return sensing_moments_.mean + 1.0 / lambda_; }

    SystemParams with_lambda(double lambda) const;
    SystemParams with_sensing(DiscreteDist sensing) const;
    SystemParams with_transmission(TransmissionModel transmission) const;

    friend bool operator==(const SystemParams& a, const SystemParams& b) {
        return a.lambda_ == b.lambda_ && a.sensing_ == b.sensing_ &&
               a.transmission_ == b.transmission_;
    }

private:
    double lambda_;
    DiscreteDist sensing_;
    TransmissionModel transmission_;
    Moments sensing_moments_;
};

/// Density of A = C + I, I ~ Exp(rate): a mixture of exponentials shifted
/// to the sensing atoms. Every query is closed form.
class AgeMixtureDensity {
public:
    struct Component {
        double weight;
        double shift;
    };

    AgeMixtureDensity(double rate, std::vector<Component> components);

    double rate() const noexcept { return rate_; }
    std::span<const Component> components() const noexcept { return components_; }
    /// m* = inf{x : f_A(x) > 0}, the smallest shift.
    double support_start() const noexcept { return components_.front().shift; }
    /// E[A] = sum_j w_j (m_j + 1/rate).
    double mean() const noexcept;

    double pdf(double x) const noexcept;
    /// Pr(A < x).
    double cdf(double x) const noexcept;
    /// Integral of a f_A(a) over [0, x].
    double partial_expectation(double x) const noexcept;
    /// E[A | A < x]. Throws DomainError when x <= m*.
    double conditional_mean_below(double x) const;

private:
    double rate_;
    std::vector<Component> components_;
};

AgeMixtureDensity build_age_density(const SystemParams& params);

double sample_sensing(const SystemParams& params, Rng& rng);
double sample_outage(const SystemParams& params, Rng& rng);
double sample_transmission(const SystemParams& params, Rng& rng);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

}  // namespace aoi
