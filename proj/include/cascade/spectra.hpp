// spectra.hpp: joint, marginal and sum-energy distributions of the two quanta.
//
// The joint density is sampled on a product grid in (Omega = wy + wz, wz).
// In these coordinates both Lorentzian factors are axis aligned, so one
// graded axis per factor resolves the ridge. Trapezoid weights are attached
// to every axis; all masses are weighted sums.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cascade/execution.hpp"
#include "cascade/quadrature.hpp"
#include "cascade/rates.hpp"

namespace cascade {

enum class SpectrumTag {
    joint,
    y_numeric,
    y_closed,
    z_numeric,
    z_closed,
    sum_numeric,
    sum_closed,
};
std::string to_string(SpectrumTag tag);

struct Axis {
    std::vector<double> nodes;
    std::vector<double> weights; // trapezoid

    std::size_t size() const { return nodes.size(); }
    // Largest spacing between neighbours within [lo, hi].
    double max_step_in(double lo, double hi) const;
};

// Nodes in [lo, hi]: step fine_step within fine_span of center, then growing
// geometrically by `growth` up to max_step. Extra nodes are inserted verbatim.
Axis graded_axis(double lo, double hi, double center, double fine_step, double fine_span,
                 double growth, double max_step, const std::vector<double>& extra = {});

struct SpectrumGrid1D {
    Axis axis;
    std::vector<double> value;
    double mass = 0.0;
    SpectrumTag tag = SpectrumTag::y_closed;
};

struct SpectrumGrid2D {
    Axis omega_sum; // Omega
    Axis omega_z;
    std::vector<double> value; // value[j * omega_sum.size() + i] at (Omega_i, wz_j)
    double mass = 0.0;
    SpectrumTag tag = SpectrumTag::joint;

    double at(std::size_t i, std::size_t j) const { return value[j * omega_sum.size() + i]; }
};

// Everything the line shapes depend on.
struct SpectralConstants {
    double lambda_tilde0 = 0.0;
    double lambda1 = 0.0;
    CorrectedEnergies bar;
};
SpectralConstants spectral_constants(const CascadeSystem& system, const PerturbedConstants& k);

struct GridSpec {
    double fine_fraction = 0.1; // fine step as a fraction of the local half-width
    double fine_halfwidths = 20.0;
    double growth = 1.05;
    double max_step = 0.0;      // 0: (range)/100
    double omega_max = 0.0;     // 0: from the density supports
};

// p(wy, wz) = V W / ([lt0^2 + (wy+wz-bar02)^2][l1^2 + (wz-bar12)^2]).
double joint_density(const CascadeSystem& system, const SpectralConstants& c, double wy,
                     double wz);

// Throws GridTooCoarse when the Omega step at bar02 exceeds lambda~0 / 5.
SpectrumGrid2D joint_spectrum(const CascadeSystem& system, const SpectralConstants& c,
                              const GridSpec& spec = {}, Execution exec = Execution::parallel);

// Graded axis in wy around bar01 used for p_y.
Axis y_axis(const CascadeSystem& system, const SpectralConstants& c, const GridSpec& spec = {});

// Numeric marginals from one joint grid. marginal_y distributes each node's
// mass linearly onto y_axis, so all three carry the joint mass.
SpectrumGrid1D marginal_y(const SpectrumGrid2D& joint, const Axis& y);
SpectrumGrid1D marginal_z(const SpectrumGrid2D& joint);
SpectrumGrid1D sum_energy(const SpectrumGrid2D& joint);

// Closed forms evaluated on a given axis.
SpectrumGrid1D marginal_y_closed(const CascadeSystem& system, const SpectralConstants& c,
                                 const Axis& y);
SpectrumGrid1D marginal_z_closed(const CascadeSystem& system, const SpectralConstants& c,
                                 const Axis& z);
SpectrumGrid1D sum_energy_closed(const CascadeSystem& system, const SpectralConstants& c,
                                 const Axis& omega, const QuadratureOptions& opts = {},
                                 Execution exec = Execution::parallel);

// ∫|a - b| / ∫|b| with the axis weights of b. Axes must coincide.
double relative_l1(const SpectrumGrid1D& a, const SpectrumGrid1D& b);

// Full width at half maximum by linear interpolation; NoPeak if the maximum
// is at the axis boundary or half maximum is not crossed on both sides.
double fwhm(const SpectrumGrid1D& s);

enum class Regime { lorentzian, deformed, continuous, unclassified };
std::string to_string(Regime r);
// 1: lambda1 < 0.1 bar01; 2: 0.1 <= lambda1/bar01 <= 10 with bar01 > 0; 3: bar01 < 0.
Regime classify_regime(double lambda1, double bar01);

} // namespace cascade
