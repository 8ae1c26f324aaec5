#include "cascade/convolution.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace cascade {

namespace {

// w = c + hw tan(theta) turns the kernel into d(theta).
QuadratureResult absorptive(const SpectralDensity& v, double c, double hw, double upper,
                            const QuadratureOptions& opts) {
    const double lo = v.support_lo();
    const double hi = std::min(v.support_hi(), upper);
    const double t0 = std::atan((lo - c) / hw);
    const double t1 = std::isfinite(hi) ? std::atan((hi - c) / hw) : 0.5 * std::numbers::pi;
    if (!(t1 > t0)) return {};
    RealFunction f = [&v, c, hw](double theta) { return v(c + hw * std::tan(theta)); };
    std::vector<double> bps{0.0};
    for (double b : v.breakpoints()) bps.push_back(std::atan((b - c) / hw));
    return integrate(f, t0, t1, opts, bps);
}

// Folded about c: the kernel equals [V(w) (w-c)^2/(hw^2+(w-c)^2)] / (w - c),
// whose numerator vanishes at w = c, so density jumps at c do not matter.
QuadratureResult dispersive(const SpectralDensity& v, double c, double hw,
                            const QuadratureOptions& opts) {
    RealFunction f = [&v, c, hw](double w) {
        const double d = w - c;
        const double d2 = d * d;
        return v(w) * d2 / (hw * hw + d2);
    };
    IntegrandHints h;
    h.scale = std::max(v.width(), hw);
    h.breakpoints = v.breakpoints();
    for (double k = 1e-2; k <= 1e3; k *= 10.0) {
        h.breakpoints.push_back(c - k * hw);
        h.breakpoints.push_back(c + k * hw);
    }
    std::erase_if(h.breakpoints, [](double x) { return !(x > 0.0); });
    const double hi = v.support_hi();
    if (std::isfinite(hi)) std::erase_if(h.breakpoints, [hi](double x) { return x > hi; });
    return principal_value(f, c, 0.0, h, opts);
}

} // namespace

QuadratureResult lorentzian_convolution(const SpectralDensity& density, double center,
                                        double half_width, ConvolutionKind kind,
                                        const QuadratureOptions& opts) {
    if (!(half_width > 0.0) || !std::isfinite(half_width))
        throw std::invalid_argument("lorentzian_convolution: half_width must be > 0");
    if (density.is_zero()) return {};
    if (kind == ConvolutionKind::absorptive)
        return absorptive(density, center, half_width, std::numeric_limits<double>::infinity(), opts);
    return dispersive(density, center, half_width, opts);
}

QuadratureResult lorentzian_absorptive_below(const SpectralDensity& density, double center,
                                             double half_width, double upper,
                                             const QuadratureOptions& opts) {
    if (!(half_width > 0.0) || !std::isfinite(half_width))
        throw std::invalid_argument("lorentzian_convolution: half_width must be > 0");
    if (density.is_zero()) return {};
    return absorptive(density, center, half_width, upper, opts);
}

} // namespace cascade
