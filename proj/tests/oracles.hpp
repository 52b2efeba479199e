// Test-only reference implementations, kept independent of the library code
// paths they are used to check. Quadrature and series here never call the
// production q_function/gamma_function/mgf.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

// Adaptive Simpson quadrature with absolute tolerance.
inline double simpson_step(const std::function<double(double)>& f, double a, double b, double fa,
                           double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-13, int depth = 60) {
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_step(f, a, b, fa, fm, fb, whole, tol, depth);
}

// Gaussian tail via the Maclaurin series of the error integral:
// Q(x) = 1/2 - (1/sqrt(2 pi)) * sum_k (-1)^k x^(2k+1) / (2^k k! (2k+1)).
// Good to ~1e-14 absolute for |x| <= 6; no erf/erfc involved.
inline double gaussian_tail_series(double x) {
    double term = x;  // k = 0 contribution before the 1/sqrt(2pi) factor
    double sum = term;
    const double x2 = x * x;
    for (int k = 1; k < 200; ++k) {
        term *= -x2 / (2.0 * k);
        const double contrib = term / (2.0 * k + 1.0);
        sum += contrib;
        if (std::abs(contrib) < 1e-18 * std::abs(sum) + 1e-300) break;
    }
    return 0.5 - sum / std::sqrt(2.0 * 3.14159265358979323846);
}

// Gamma(1/3) = 3 * integral_0^inf exp(-v^3) dv (substituting t = v^3 in the
// Euler integral removes the endpoint singularity).
inline double gamma_one_third() {
    return 3.0 * integrate([](double v) { return std::exp(-v * v * v); }, 0.0, 12.0, 1e-15, 70);
}

// Plain bisection, independent of the library's.
inline double bisect(const std::function<double(double)>& f, double lo, double hi) {
    double flo = f(lo);
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Two-sample Kolmogorov-Smirnov distance over two ascending samples.
inline double two_sample_ks(const std::vector<double>& a, const std::vector<double>& b) {
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j])
            ++i;
        else
            ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

// Deterministic draws for randomized property tests.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform(double lo, double hi) {
        const double u = static_cast<double>(eng_() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    }

    double log_uniform(double lo, double hi) {
        return std::exp(uniform(std::log(lo), std::log(hi)));
    }

    std::uint64_t integer() { return eng_(); }

private:
    std::mt19937_64 eng_;
};

}  // namespace oracle
