#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "txcap/errors.hpp"

namespace txcap {

// A value constrained to [0, 1]. Construction validates, so downstream code
// can take the range for granted.
class Probability {
public:
    Probability() = default;

    explicit Probability(double v) : value_(v) {
        if (!(v >= 0.0 && v <= 1.0))
            throw std::domain_error("probability outside [0,1]");
    }

    double value() const noexcept { return value_; }

private:
    double value_ = 0.0;
};

// Gaussian tail probability Q(x) = P(N(0,1) > x), via the complementary
// error function: Q(x) = erfc(x / sqrt(2)) / 2. Absolute error < 1e-14.
inline Probability q_function(double x) {
    if (!std::isfinite(x))
        throw std::domain_error("q_function: non-finite argument");
    return Probability(0.5 * std::erfc(x * 0.7071067811865475244));
}

// Euler gamma function for positive real arguments.
inline double gamma_function(double x) {
    if (!(x > 0.0))
        throw std::domain_error("gamma_function: argument must be positive");
    return std::tgamma(x);
}

// Bisection for a continuous monotone f with a sign change on [lo, hi].
// Stops once the bracket is narrower than tol * max(1, |midpoint|).
template <typename F>
double bisect_root(F&& f, double lo, double hi, double tol) {
    if (!(tol > 0.0))
        throw std::invalid_argument("bisect_root: tolerance must be positive");
    if (lo > hi)
        std::swap(lo, hi);

    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw bracketing_error("bisect_root: no sign change on interval");

    // 200 halvings exhaust double precision for any sane bracket.
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if (hi - lo <= tol * std::max(1.0, std::abs(mid)) || mid == lo || mid == hi)
            return mid;
        double fmid = f(mid);
        if (fmid == 0.0)
            return mid;
        if ((fmid > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

namespace detail {

inline double gaussian_pdf(double x) {
    return 0.3989422804014326779 * std::exp(-0.5 * x * x);
}

}  // namespace detail

// Inverse of q_function on (0, 1). Bisection over a fixed [-8, 8] bracket
// (widened only for p closer than ~6e-16 to either endpoint), polished with
// one Newton step.
inline double q_inverse(Probability p) {
    const double target = p.value();
    if (!(target > 0.0 && target < 1.0))
        throw std::domain_error("q_inverse: probability must lie strictly in (0,1)");

    double lo = -8.0, hi = 8.0;
    // Q(40) underflows to zero and Q(-40) rounds to one, so this always
    // brackets any representable p in (0,1).
    while (q_function(hi).value() >= target && hi < 40.0) hi *= 2.0;
    while (q_function(lo).value() <= target && lo > -40.0) lo *= 2.0;

    auto g = [target](double x) { return q_function(x).value() - target; };
    double x = bisect_root(g, lo, hi, 1e-13);

    double phi = detail::gaussian_pdf(x);
    if (phi > 1e-300)
        x += (q_function(x).value() - target) / phi;  // Q' = -phi
    return x;
}

}  // namespace txcap
