// kernels.hpp: memory kernels and the Volterra amplitude equation
//   da0/dt = -∫_0^t a0(t1) q(t - t1) dt1.

#pragma once

#include <complex>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "cascade/densities.hpp"
#include "cascade/execution.hpp"
#include "cascade/quadrature.hpp"
#include "cascade/rates.hpp"

namespace cascade {

using cplx = std::complex<double>;

// ∫_0^inf V(w) exp(-i w tau) dw. Closed form for FlatWindow, OhmicExp and
// Tabulated; oscillatory quadrature otherwise (OscillationResolution when the
// range holds too many periods).
cplx density_fourier(const SpectralDensity& density, double tau,
                     const QuadratureOptions& opts = {});

// q(tau) = exp(-damping tau) exp(i E tau) ∫ V(w) exp(-i w tau) dw on tau = k h.
struct MemoryKernel {
    double transition_energy = 0.0;
    SpectralDensity density;
    cplx damping{0.0, 0.0};
    double step = 0.0;
    std::vector<cplx> samples; // zero beyond the stored length

    cplx at(std::size_t k) const { return k < samples.size() ? samples[k] : cplx{}; }
};

inline constexpr double kernel_trim_ratio = 1e-12;

// Samples q on k = 0..count-1, then drops the tail where |q| < 1e-12 q(0).
MemoryKernel build_kernel(const SpectralDensity& density, double transition_energy,
                          cplx damping, double step, std::size_t count,
                          const QuadratureOptions& opts = {});

inline MemoryKernel build_kernel(const SpectralDensity& density, double transition_energy,
                                 const ComplexDecayConstant& damping, double step,
                                 std::size_t count, const QuadratureOptions& opts = {}) {
    return build_kernel(density, transition_energy, damping.value(), step, count, opts);
}

enum class TraceMethod { volterra, markov };
std::string to_string(TraceMethod m);

struct AmplitudeTrace {
    double step = 0.0;
    std::vector<cplx> a0; // a0[k] at t = k * step
    TraceMethod method = TraceMethod::volterra;

    double time(std::size_t k) const { return static_cast<double>(k) * step; }
    std::size_t size() const { return a0.size(); }
};

struct VolterraOptions {
    // Re-solve with step/2 and throw StepTooCoarse if the endpoint moves by more than rtol.
    bool check_step = false;
    double rtol = 1e-3;
    Execution exec = Execution::parallel;
};

// Product trapezoidal scheme on the kernel grid up to time T.
AmplitudeTrace solve_volterra(const MemoryKernel& kernel, double T,
                              const VolterraOptions& opts = {});

// Convenience: builds the kernel on the solver grid, then solves.
AmplitudeTrace solve_volterra(const SpectralDensity& density, double transition_energy,
                              cplx damping, double T, double h,
                              const VolterraOptions& opts = {});

// a0(t) = exp(-gamma t).
AmplitudeTrace markov_trace(const ComplexDecayConstant& gamma, double T, double h);

struct TraceDeviation {
    double sup_relative = 0.0;     // max | |a| - |b| | / |b|
    double l2_relative = 0.0;      // ||a| - |b||_2 / ||b||_2
    double sup_complex = 0.0;      // max |a - b|
    std::size_t samples = 0;
};

// Deviation over t_min <= t <= t_max. Throws GridMismatch unless steps match.
TraceDeviation compare_traces(const AmplitudeTrace& a, const AmplitudeTrace& b, double t_min,
                              double t_max = std::numeric_limits<double>::infinity());

// Observed order from solutions at h, h/2, h/4 compared on the coarse grid.
double observed_order(const AmplitudeTrace& h1, const AmplitudeTrace& h2,
                      const AmplitudeTrace& h4);

} // namespace cascade
