// densities.hpp: coupling spectral densities V(w), W(w).

#pragma once

#include <string>
#include <variant>
#include <vector>

#include "cascade/quadrature.hpp"

namespace cascade {

// v0 on [lo, hi], zero elsewhere.
struct FlatWindow {
    double v0;
    double lo;
    double hi;
};

// g2 * w * exp(-w / cutoff)
struct OhmicExp {
    double g2;
    double cutoff;
};

// (A / pi) * width / (width^2 + (w - center)^2), cut at w = 0.
struct ShiftedLorentzian {
    double amplitude;
    double center;
    double width;
};

// Linear interpolation between nodes, zero outside [omega.front(), omega.back()].
struct Tabulated {
    std::vector<double> omega;
    std::vector<double> value;
};

using DensityFamily = std::variant<FlatWindow, OhmicExp, ShiftedLorentzian, Tabulated>;

inline constexpr double default_weight_bound = 1e12;

class SpectralDensity {
public:
    // Identically zero density.
    SpectralDensity();

    // Validates parameters (std::invalid_argument) and checks that the total
    // weight is finite and below weight_bound.
    explicit SpectralDensity(DensityFamily family, double weight_bound = default_weight_bound);

    // Two-column CSV (omega, value) with a one-line header.
    static SpectralDensity from_csv(const std::string& path,
                                    double weight_bound = default_weight_bound);

    double operator()(double omega) const { return evaluate(omega); }
    double evaluate(double omega) const;

    const DensityFamily& family() const { return family_; }
    std::string family_name() const;

    double cutoff_scale() const;
    // Scale over which the density changes appreciably; used for tail maps.
    double width() const;
    // Interval outside which the density is exactly zero (hi may be +inf).
    double support_lo() const;
    double support_hi() const;
    double sup() const;
    bool is_zero() const;

    std::vector<double> breakpoints() const;
    std::vector<double> discontinuities() const;
    IntegrandHints hints() const;

    SpectralDensity scaled(double c) const;

    // Integral over [0, inf) by adaptive quadrature.
    QuadratureResult total_weight(const QuadratureOptions& opts = {}) const;

private:
    DensityFamily family_;
};

} // namespace cascade
