// Independent reference values used by the unit and acceptance tests.

#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>

namespace oracle_ref {

using cplx = std::complex<double>;

// Composite midpoint rule with n cells.
inline double midpoint(const std::function<double(double)>& f, double a, double b, long n) {
    const double h = (b - a) / static_cast<double>(n);
    double s = 0.0;
    double c = 0.0; // Kahan
    for (long i = 0; i < n; ++i) {
        const double y = f(a + (static_cast<double>(i) + 0.5) * h) - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    return s * h;
}

// P∫_0^inf V(w)/(w - pole) dw for V = g2 w exp(-w/L), pole > 0.
inline double ohmic_pv(double g2, double L, double pole) {
    // w/(w-p) = 1 + p/(w-p);  P∫_0^inf e^{-w/L}/(w-p) dw = -e^{-p/L} Ei(p/L)
    return g2 * (L - pole * std::exp(-pole / L) * std::expint(pole / L));
}

// ∫_0^inf dx / ((x-p)(x-q)) for p, q off the nonnegative real axis.
inline cplx pair_integral(cplx p, cplx q) {
    return (std::log(-q) - std::log(-p)) / (p - q);
}

// ∫_0^inf (A/pi) G/((x-wc)^2+G^2) * hw/((x-c)^2+hw^2) dx
inline double lorentzian_absorptive(double A, double wc, double G, double c, double hw) {
    const cplx p{wc, G};
    const cplx q{c, hw};
    const cplx r = 0.5 * (pair_integral(p, std::conj(q)) - pair_integral(p, q));
    return A / std::numbers::pi * r.real();
}

// ∫_0^inf (A/pi) G/((x-wc)^2+G^2) * (x-c)/((x-c)^2+hw^2) dx
inline double lorentzian_dispersive(double A, double wc, double G, double c, double hw) {
    const cplx p{wc, G};
    const cplx q{c, hw};
    const cplx r = 0.5 * (pair_integral(p, q) + pair_integral(p, std::conj(q)));
    return A / std::numbers::pi * r.imag();
}

} // namespace oracle_ref
