#include "cascade/rates.hpp"

#include <cmath>
#include <exception>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "cascade/convolution.hpp"

namespace cascade {

void CascadeSystem::validate() const {
    if (!std::isfinite(omega01)) throw std::invalid_argument("omega01 must be finite");
    if (!(omega12 > 0.0) || !std::isfinite(omega12))
        throw std::invalid_argument("omega12 must be > 0");
    if (!(density_z(omega12) > 0.0)) {
        std::ostringstream msg;
        msg << "W(omega12) must be > 0; got W(" << omega12 << ") = " << density_z(omega12);
        throw std::invalid_argument(msg.str());
    }
}

ComplexDecayConstant bare_constant(const SpectralDensity& density, double transition_energy,
                                   const QuadratureOptions& opts) {
    ComplexDecayConstant g;
    if (density.is_zero()) return g;
    g.lambda = std::numbers::pi * density(transition_energy);
    RealFunction f = [&density](double w) { return density(w); };
    g.mu = -principal_value(f, transition_energy, 0.0, density.hints(), opts).value;
    return g;
}

ComplexDecayConstant perturbed_constant(const SpectralDensity& density_y, double omega01,
                                        const ComplexDecayConstant& gamma1,
                                        const QuadratureOptions& opts) {
    const double c = omega01 - gamma1.mu;
    ComplexDecayConstant g;
    g.lambda = lorentzian_convolution(density_y, c, gamma1.lambda, ConvolutionKind::absorptive, opts)
                   .value;
    g.mu = -lorentzian_convolution(density_y, c, gamma1.lambda, ConvolutionKind::dispersive, opts)
                .value;
    return g;
}

PerturbedConstants perturbed_constant(const CascadeSystem& system, const QuadratureOptions& opts) {
    system.validate();
    PerturbedConstants k;
    k.gamma1 = bare_constant(system.density_z, system.omega12, opts);
    k.gamma_tilde0 = perturbed_constant(system.density_y, system.omega01, k.gamma1, opts);
    return k;
}

double golden_rule(const SpectralDensity& density_y, double omega01, double mu1) {
    return 2.0 * std::numbers::pi * density_y(omega01 - mu1);
}

double golden_rule(const CascadeSystem& system, const ComplexDecayConstant& gamma1) {
    return golden_rule(system.density_y, system.omega01, gamma1.mu);
}

QuadratureResult perturbed_rate_direct(const SpectralDensity& density_y, double omega01,
                                       const ComplexDecayConstant& gamma1,
                                       const QuadratureOptions& opts) {
    const double l1 = gamma1.lambda;
    const double mu1 = gamma1.mu;
    if (!(l1 > 0.0)) throw std::invalid_argument("perturbed_rate_direct: lambda1 must be > 0");
    RealFunction f = [&density_y, l1, mu1, omega01](double w) {
        const double d = w - omega01 + mu1;
        return 2.0 * std::numbers::pi * density_y(w) * (1.0 / std::numbers::pi) * l1 /
               (l1 * l1 + d * d);
    };
    const double c = omega01 - mu1;
    IntegrandHints h = density_y.hints();
    h.scale = std::max(h.scale, l1);
    for (double k = 1e-3; k <= 1e3; k *= 10.0) {
        h.breakpoints.push_back(c - k * l1);
        h.breakpoints.push_back(c + k * l1);
    }
    h.breakpoints.push_back(c);
    std::erase_if(h.breakpoints, [](double x) { return !(x > 0.0); });
    const double hi = density_y.support_hi();
    if (std::isfinite(hi)) {
        std::erase_if(h.breakpoints, [hi](double x) { return x > hi; });
        return integrate(f, density_y.support_lo(), hi, opts, h.breakpoints);
    }
    return integrate_semi_infinite(f, density_y.support_lo(), h, opts);
}

CorrectedEnergies corrected_energies(double omega01, double omega12,
                                     const ComplexDecayConstant& gamma_tilde0,
                                     const ComplexDecayConstant& gamma1) {
    CorrectedEnergies e;
    e.bar01 = omega01 + gamma_tilde0.mu - gamma1.mu;
    e.bar12 = omega12 + gamma1.mu;
    e.bar02 = e.bar01 + e.bar12;
    return e;
}

CorrectedEnergies corrected_energies(const CascadeSystem& system, const PerturbedConstants& k) {
    return corrected_energies(system.omega01, system.omega12, k.gamma_tilde0, k.gamma1);
}

std::vector<ZenoPoint> zeno_curve(const SpectralDensity& density_y, double omega01, double mu1,
                                  std::span<const double> lambda1_values,
                                  const QuadratureOptions& opts, Execution exec) {
    const std::size_t n = lambda1_values.size();
    std::vector<ZenoPoint> out(n);
    std::vector<std::exception_ptr> failures(n);
    const double golden = golden_rule(density_y, omega01, mu1);
    auto point = [&](std::size_t i) {
        try {
            const ComplexDecayConstant g1{lambda1_values[i], mu1};
            const ComplexDecayConstant gt = perturbed_constant(density_y, omega01, g1, opts);
            out[i] = ZenoPoint{g1.lambda, gt.rate(), gt.mu, golden};
        } catch (...) {
            failures[i] = std::current_exception();
        }
    };
    if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
            point(static_cast<std::size_t>(i));
    } else {
        for (std::size_t i = 0; i < n; ++i) point(i);
    }
    for (const auto& e : failures)
        if (e) std::rethrow_exception(e);
    return out;
}

std::vector<ZenoPoint> zeno_curve(const CascadeSystem& system,
                                  std::span<const double> lambda1_values,
                                  const QuadratureOptions& opts, Execution exec) {
    system.validate();
    const ComplexDecayConstant g1 = bare_constant(system.density_z, system.omega12, opts);
    return zeno_curve(system.density_y, system.omega01, g1.mu, lambda1_values, opts, exec);
}

} // namespace cascade
