#pragma once

#include <cmath>
#include <initializer_list>
#include <utility>
#include <vector>

#include "txcap/errors.hpp"
#include "txcap/numerics.hpp"

namespace txcap {

inline constexpr double pi = 3.14159265358979323846;

// One tier of interferers: a Poisson field of the given density, each
// transmitter contributing power * distance^-alpha at the origin. The power
// here is the effective radiated power (any channel gain constant already
// folded in).
struct InterferenceComponent {
    double density = 0.0;  // transmitters per m^2
    double power = 0.0;    // W
};

// Distribution of the aggregate interference seen at the origin from one or
// more superposed Poisson tiers under d^-alpha path loss. The law depends on
// its components only through the dispersion sum(density_k * power_k^(2/alpha)),
// so superposition is just component concatenation.
class StableLaw {
public:
    StableLaw(double alpha, std::vector<InterferenceComponent> components)
        : alpha_(alpha), components_(std::move(components)) {
        if (!(alpha_ > 2.0))
            throw std::domain_error("StableLaw: path-loss exponent must exceed 2");
        for (const auto& c : components_) {
            if (!(c.density >= 0.0))
                throw std::domain_error("StableLaw: component density must be >= 0");
            if (!(c.power > 0.0))
                throw std::domain_error("StableLaw: component power must be > 0");
        }
    }

    StableLaw(double alpha, std::initializer_list<InterferenceComponent> components)
        : StableLaw(alpha, std::vector<InterferenceComponent>(components)) {}

    double alpha() const noexcept { return alpha_; }
    const std::vector<InterferenceComponent>& components() const noexcept { return components_; }

    // sum_k density_k * power_k^(2/alpha); the single scalar that determines
    // every distributional quantity below.
    double dispersion() const {
        double d = 0.0;
        for (const auto& c : components_)
            d += c.density * std::pow(c.power, 2.0 / alpha_);
        return d;
    }

    // sum_k density_k * power_k, the area density of received power; used by
    // window-truncation bias accounting.
    double power_density() const {
        double d = 0.0;
        for (const auto& c : components_)
            d += c.density * c.power;
        return d;
    }

private:
    double alpha_;
    std::vector<InterferenceComponent> components_;
};

namespace detail {

inline void require_levy(const StableLaw& law) {
    if (law.alpha() != 4.0)
        throw unsupported_exponent_error(
            "closed-form density/CDF available only for path-loss exponent 4");
}

// Arguments past this point make Q underflow; treating them as the limit
// avoids feeding infinities into q_function.
inline constexpr double q_arg_clamp = 38.0;

}  // namespace detail

// Laplace transform E[exp(-s X)] of the aggregate interference X,
// exp[-pi * s^(2/alpha) * Gamma(1 - 2/alpha) * dispersion]. Valid for any
// alpha > 2.
inline double mgf(const StableLaw& law, double s) {
    if (!(s >= 0.0))
        throw std::domain_error("mgf: transform argument must be >= 0");
    const double a = law.alpha();
    return std::exp(-pi * std::pow(s, 2.0 / a) * gamma_function(1.0 - 2.0 / a) *
                    law.dispersion());
}

// Density of the aggregate interference for alpha = 4 (a one-sided stable
// law of index 1/2): f(x) = (pi/2) D x^(-3/2) exp(-pi^3 D^2 / (4x)).
inline double levy_pdf(const StableLaw& law, double x) {
    detail::require_levy(law);
    if (!(x > 0.0))
        throw std::domain_error("levy_pdf: support is x > 0");
    const double d = law.dispersion();
    return 0.5 * pi * d * std::pow(x, -1.5) * std::exp(-pi * pi * pi * d * d / (4.0 * x));
}

// x maximizing levy_pdf: pi^3 D^2 / 6.
inline double levy_mode(const StableLaw& law) {
    detail::require_levy(law);
    const double d = law.dispersion();
    return pi * pi * pi * d * d / 6.0;
}

// CDF of the aggregate interference for alpha = 4:
// F(x) = 2 Q(pi^(3/2) D / sqrt(2x)).
inline Probability levy_cdf(const StableLaw& law, double x) {
    detail::require_levy(law);
    if (!(x > 0.0))
        throw std::domain_error("levy_cdf: support is x > 0");
    const double d = law.dispersion();
    double arg = std::pow(pi, 1.5) * d / std::sqrt(2.0 * x);
    if (arg > detail::q_arg_clamp)
        arg = detail::q_arg_clamp;
    return Probability(2.0 * q_function(arg).value());
}

// P(X >= threshold) = 1 - F(threshold); the outage-side tail.
inline Probability tail_probability(const StableLaw& law, double threshold) {
    if (!(threshold > 0.0))
        throw std::domain_error("tail_probability: threshold must be > 0");
    return Probability(1.0 - levy_cdf(law, threshold).value());
}

// Inverse CDF for alpha = 4: the x with levy_cdf(law, x) = p.
inline double levy_quantile(const StableLaw& law, Probability p) {
    detail::require_levy(law);
    if (!(p.value() > 0.0 && p.value() < 1.0))
        throw std::domain_error("levy_quantile: probability must lie strictly in (0,1)");
    const double d = law.dispersion();
    const double z = q_inverse(Probability(0.5 * p.value()));
    return pi * pi * pi * d * d / (2.0 * z * z);
}

}  // namespace txcap
