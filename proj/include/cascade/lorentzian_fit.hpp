// lorentzian_fit.hpp: least-squares Lorentzian fit of a sampled line.

#pragma once

#include "cascade/spectra.hpp"

namespace cascade {

struct LorentzianFit {
    double center = 0.0;
    double half_width = 0.0;
    double amplitude = 0.0; // peak height
    double residual = 0.0;  // sqrt(sum w (model - y)^2 / sum w y^2)
    int iterations = 0;
};

// Model A / (1 + ((x - c)/g)^2), Levenberg-Marquardt, weighted by the axis
// quadrature weights. Throws NoPeak if the maximum sits on the axis boundary,
// half maximum is not crossed on both sides, or the fit does not converge.
LorentzianFit fit_lorentzian(const SpectrumGrid1D& spectrum);

} // namespace cascade
