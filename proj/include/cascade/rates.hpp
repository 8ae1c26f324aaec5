// rates.hpp: bare and perturbed complex decay constants, corrected energies.

#pragma once

#include <complex>
#include <span>
#include <vector>

#include "cascade/densities.hpp"
#include "cascade/execution.hpp"
#include "cascade/quadrature.hpp"

namespace cascade {

// gamma = lambda + i mu. lambda is half the decay probability per unit time,
// mu the radiation shift.
struct ComplexDecayConstant {
    double lambda = 0.0;
    double mu = 0.0;

    double rate() const { return 2.0 * lambda; }
    std::complex<double> value() const { return {lambda, mu}; }
};

struct CascadeSystem {
    double omega01 = 0.0;
    double omega12 = 0.0;
    SpectralDensity density_y; // V, first quantum
    SpectralDensity density_z; // W, second quantum

    double omega02() const { return omega01 + omega12; }
    // Throws std::invalid_argument unless omega12 > 0 and W(omega12) > 0.
    void validate() const;
};

struct PerturbedConstants {
    ComplexDecayConstant gamma_tilde0;
    ComplexDecayConstant gamma1;
};

struct CorrectedEnergies {
    double bar01 = 0.0;
    double bar12 = 0.0;
    double bar02 = 0.0;
};

// lambda = pi V(E), mu = -P∫ V(w) / (w - E) dw.
ComplexDecayConstant bare_constant(const SpectralDensity& density, double transition_energy,
                                   const QuadratureOptions& opts = {});

// gamma~0 for a given gamma1: Lorentzian convolutions of V centred at
// omega01 - mu1 with half-width lambda1.
ComplexDecayConstant perturbed_constant(const SpectralDensity& density_y, double omega01,
                                        const ComplexDecayConstant& gamma1,
                                        const QuadratureOptions& opts = {});

// gamma1 from (W, omega12), then gamma~0.
PerturbedConstants perturbed_constant(const CascadeSystem& system,
                                      const QuadratureOptions& opts = {});

// Gamma0 = 2 pi V(omega01 - mu1).
double golden_rule(const SpectralDensity& density_y, double omega01, double mu1);
double golden_rule(const CascadeSystem& system, const ComplexDecayConstant& gamma1);

// Gamma~0 = 2 pi ∫ V(w) (1/pi) lambda1 / (lambda1^2 + (w - omega01 + mu1)^2) dw,
// integrated directly in w. Independent of the convolution route.
QuadratureResult perturbed_rate_direct(const SpectralDensity& density_y, double omega01,
                                       const ComplexDecayConstant& gamma1,
                                       const QuadratureOptions& opts = {});

CorrectedEnergies corrected_energies(double omega01, double omega12,
                                     const ComplexDecayConstant& gamma_tilde0,
                                     const ComplexDecayConstant& gamma1);
CorrectedEnergies corrected_energies(const CascadeSystem& system, const PerturbedConstants& k);

struct ZenoPoint {
    double lambda1;
    double rate_tilde;  // Gamma~0 = 2 lambda~0
    double mu_tilde;
    double rate_golden; // Gamma0 at omega01 - mu1
};

// Sweeps lambda1 with mu1 held at its value from W. Output order follows input.
std::vector<ZenoPoint> zeno_curve(const CascadeSystem& system,
                                  std::span<const double> lambda1_values,
                                  const QuadratureOptions& opts = {},
                                  Execution exec = Execution::parallel);

// Same sweep with an explicit mu1.
std::vector<ZenoPoint> zeno_curve(const SpectralDensity& density_y, double omega01, double mu1,
                                  std::span<const double> lambda1_values,
                                  const QuadratureOptions& opts = {},
                                  Execution exec = Execution::parallel);

} // namespace cascade
