// oracle.hpp: brute-force check on a discretized continuum.
//
// Both continua are sampled on uniform midpoint grids with real couplings
// g_k = sqrt(V(w_k) dy), h_j = sqrt(W(w_j) dz). The state holds
// a0, a1[k] and a2[k][j]; the interaction-picture equations are integrated
// with classical RK4.

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "cascade/execution.hpp"
#include "cascade/rates.hpp"
#include "cascade/spectra.hpp"

namespace cascade {

struct Mode {
    double omega;
    double coupling;
};

struct DiscreteModel {
    double omega01 = 0.0;
    double omega12 = 0.0;
    std::vector<Mode> y_modes;
    std::vector<Mode> z_modes;
    double dy = 0.0;
    double dz = 0.0;

    std::size_t ny() const { return y_modes.size(); }
    std::size_t nz() const { return z_modes.size(); }
    std::size_t dimension() const { return 1 + ny() + ny() * nz(); }
    // 2 pi / spacing of each band, and the smaller of the two.
    double recurrence_time_y() const;
    double recurrence_time_z() const;
    double recurrence_time() const;
    // Largest interaction-picture detuning |w - omega01|, |w - omega12|.
    double max_detuning() const;
};

struct Range {
    double lo;
    double hi;
};

inline constexpr double outside_mass_limit = 1e-3;
inline constexpr double recurrence_margin = 20.0;

// Throws RangeTooNarrow when more than 1e-3 of a density's mass lies outside
// its range, and RecurrenceGuard unless lambda~0 T_rec,y > 20 and lambda1 T_rec,z > 20.
DiscreteModel discretize(const CascadeSystem& system, std::size_t ny, std::size_t nz,
                         Range y_range, Range z_range, const QuadratureOptions& opts = {});

struct OracleSample {
    double t;
    std::complex<double> a0;
    double p0;   // |a0|^2
    double p1;   // sum |a1|^2
    double p2;   // sum |a2|^2
    double norm; // p0 + p1 + p2
};

struct OracleRun {
    std::vector<OracleSample> history;
    std::vector<std::complex<double>> state; // final [a0, a1..., a2...]
    double T = 0.0;
    double dt = 0.0;
    double max_norm_error = 0.0;
};

struct EvolveOptions {
    std::size_t sample_every = 10;
    double norm_tolerance = 1e-8;
    Execution exec = Execution::parallel;
};

// Throws RecurrenceGuard if T >= T_rec / 2, NormDrift if the norm leaves
// 1 +- norm_tolerance, std::invalid_argument if dt > 0.1 / max_detuning.
OracleRun evolve(const DiscreteModel& model, double T, double dt, const EvolveOptions& opts = {});

struct DiscreteSpectrum {
    std::size_t ny = 0;
    std::size_t nz = 0;
    std::vector<double> joint;      // p[k * nz + j] = |a2kj|^2 / (dy dz)
    std::vector<double> marginal_y; // sum_j p dz
    std::vector<double> marginal_z; // sum_k p dy
    double emitted = 0.0;           // sum p dy dz
    double p0 = 0.0;
    double p1 = 0.0;
};

inline constexpr double intermediate_limit = 1e-3;

// Throws NotConverged when sum |a1|^2 exceeds 1e-3.
DiscreteSpectrum extract_spectra(const OracleRun& run, const DiscreteModel& model);

// Joint density of the analytic line shapes on the oracle mode grid.
std::vector<double> analytic_joint_on_modes(const CascadeSystem& system,
                                            const SpectralConstants& c,
                                            const DiscreteModel& model);

// sum |a - b| / sum |b|.
double relative_l1(const std::vector<double>& a, const std::vector<double>& b);

// Largest |a0 - a0'| and population difference between runs at dt and 2 dt.
double step_doubling_deviation(const DiscreteModel& model, double T, double dt,
                               const EvolveOptions& opts = {});

} // namespace cascade
