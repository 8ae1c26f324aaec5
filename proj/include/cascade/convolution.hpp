// convolution.hpp: Lorentzian-kernel integrals of a spectral density.

#pragma once

#include "cascade/densities.hpp"
#include "cascade/quadrature.hpp"

namespace cascade {

enum class ConvolutionKind { absorptive, dispersive };

// absorptive:  ∫_0^inf V(w) hw / (hw^2 + (w - c)^2) dw
// dispersive:  ∫_0^inf V(w) (w - c) / (hw^2 + (w - c)^2) dw
// half_width must be > 0 (std::invalid_argument otherwise).
QuadratureResult lorentzian_convolution(const SpectralDensity& density, double center,
                                        double half_width, ConvolutionKind kind,
                                        const QuadratureOptions& opts = {});

// Absorptive kind restricted to w <= upper.
QuadratureResult lorentzian_absorptive_below(const SpectralDensity& density, double center,
                                             double half_width, double upper,
                                             const QuadratureOptions& opts = {});

} // namespace cascade
