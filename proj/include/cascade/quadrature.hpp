// quadrature.hpp: adaptive one-dimensional integration.
//
// Globally adaptive Gauss-Kronrod (10/21 point) with bisection of the worst
// interval. Semi-infinite ranges are integrated up to a multiple of a caller
// supplied scale and the remainder through the map x = X + s*u/(1-u).

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace cascade {

struct QuadratureOptions {
    double rtol = 1e-8;
    double atol = 1e-12;
    std::size_t max_subdivisions = 5000;
    // Finite part of a semi-infinite range ends at (largest hint) + tail_multiple * scale.
    double tail_multiple = 50.0;
};

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    std::size_t evaluations = 0;

    QuadratureResult& operator+=(const QuadratureResult& o) {
        value += o.value;
        error_estimate += o.error_estimate;
        evaluations += o.evaluations;
        return *this;
    }
};

using RealFunction = std::function<double(double)>;

// Structural information about an integrand.
struct IntegrandHints {
    double scale = 1.0;                  // width beyond which the integrand is negligible
    std::vector<double> breakpoints;     // kinks and jumps to align subintervals with
    std::vector<double> discontinuities; // jumps only (used to reject ill-posed poles)
};

// Single Gauss-Kronrod 21 panel, QUADPACK error model.
struct PanelEstimate {
    double value;
    double error;
    double abs_value; // integral of |f|, for the round-off floor
};
PanelEstimate gauss_kronrod21(const RealFunction& f, double a, double b);

// Adaptive integral of f over [a, b]. Interior breakpoints seed the partition.
// Throws NumericalError(NoConvergence) when the subdivision budget runs out.
QuadratureResult integrate(const RealFunction& f, double a, double b,
                           const QuadratureOptions& opts = {},
                           std::span<const double> breakpoints = {});

// Integral of f over [lo, +inf).
QuadratureResult integrate_semi_infinite(const RealFunction& f, double lo,
                                         const IntegrandHints& hints,
                                         const QuadratureOptions& opts = {});

// Cauchy principal value of  P∫_lo^inf f(x) / (x - pole) dx.
// For pole > lo the interval [lo, 2 pole - lo] is folded onto itself so the
// integrand becomes [f(pole+s) - f(pole-s)] / s, which is bounded for f smooth
// at the pole. For pole <= lo this is an ordinary integral.
// Throws PoleOnSupportBoundary when the pole sits on a listed discontinuity.
QuadratureResult principal_value(const RealFunction& f, double pole, double lo,
                                 const IntegrandHints& hints,
                                 const QuadratureOptions& opts = {});

// Half-open version with lo = 0, the common case for spectral densities.
inline QuadratureResult principal_value(const RealFunction& f, double pole,
                                        const IntegrandHints& hints,
                                        const QuadratureOptions& opts = {}) {
    return principal_value(f, pole, 0.0, hints, opts);
}

} // namespace cascade
