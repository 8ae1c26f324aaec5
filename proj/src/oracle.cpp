#include "cascade/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "cascade/errors.hpp"

namespace cascade {

namespace {

using cplx = std::complex<double>;

std::vector<Mode> sample_modes(const SpectralDensity& d, std::size_t n, Range r, double& step) {
    step = (r.hi - r.lo) / static_cast<double>(n);
    std::vector<Mode> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double w = r.lo + (static_cast<double>(k) + 0.5) * step;
        out[k] = Mode{w, std::sqrt(d(w) * step)};
    }
    return out;
}

void check_range(const SpectralDensity& d, Range r, const char* name,
                 const QuadratureOptions& opts) {
    if (!(r.hi > r.lo) || r.lo < 0.0) {
        std::ostringstream msg;
        msg << name << " range must satisfy 0 <= lo < hi";
        throw std::invalid_argument(msg.str());
    }
    const double total = d.total_weight(opts).value;
    if (total == 0.0) return;
    const double lo = std::max(r.lo, d.support_lo());
    const double hi = std::min(r.hi, d.support_hi());
    double inside = 0.0;
    if (hi > lo)
        inside = integrate([&d](double w) { return d(w); }, lo, hi, opts, d.breakpoints()).value;
    const double outside = (total - inside) / total;
    if (outside > outside_mass_limit) {
        std::ostringstream msg;
        msg << name << " range [" << r.lo << ", " << r.hi << "] misses a fraction " << outside
            << " of the density mass";
        throw NumericalError(ErrorKind::RangeTooNarrow, msg.str());
    }
}

struct Workspace {
    std::vector<cplx> gy;      // g_k e^{i d_k t}
    std::vector<cplx> hz;      // h_j e^{i e_j t}
    std::vector<cplx> a0_term; // per-k contribution to da0
};

// d psi / dt for the interaction-picture equations.
void derivative(const DiscreteModel& m, double t, const cplx* psi, cplx* out, Workspace& w,
                Execution exec) {
    const std::size_t ny = m.ny();
    const std::size_t nz = m.nz();
    constexpr cplx mi{0.0, -1.0};
    for (std::size_t k = 0; k < ny; ++k) {
        const double ph = (m.y_modes[k].omega - m.omega01) * t;
        w.gy[k] = m.y_modes[k].coupling * cplx{std::cos(ph), std::sin(ph)};
    }
    for (std::size_t j = 0; j < nz; ++j) {
        const double ph = (m.z_modes[j].omega - m.omega12) * t;
        w.hz[j] = m.z_modes[j].coupling * cplx{std::cos(ph), std::sin(ph)};
    }
    const cplx a0 = psi[0];
    const cplx* a1 = psi + 1;
    const cplx* a2 = psi + 1 + ny;
    cplx* d1 = out + 1;
    cplx* d2 = out + 1 + ny;
    auto block = [&](std::size_t k) {
        const cplx* row = a2 + k * nz;
        cplx* drow = d2 + k * nz;
        const cplx a1k = a1[k];
        cplx acc{};
        for (std::size_t j = 0; j < nz; ++j) {
            acc += std::conj(w.hz[j]) * row[j];
            drow[j] = mi * w.hz[j] * a1k;
        }
        d1[k] = mi * (w.gy[k] * a0 + acc);
        w.a0_term[k] = std::conj(w.gy[k]) * a1k;
    };
    if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(ny); ++k)
            block(static_cast<std::size_t>(k));
    } else {
        for (std::size_t k = 0; k < ny; ++k) block(k);
    }
    cplx s{};
    for (std::size_t k = 0; k < ny; ++k) s += w.a0_term[k];
    out[0] = mi * s;
}

OracleSample sample(const DiscreteModel& m, double t, const std::vector<cplx>& psi) {
    OracleSample s{};
    s.t = t;
    s.a0 = psi[0];
    s.p0 = std::norm(psi[0]);
    for (std::size_t k = 0; k < m.ny(); ++k) s.p1 += std::norm(psi[1 + k]);
    const std::size_t off = 1 + m.ny();
    s.p2 = chunked_sum<double>(off, psi.size(), Execution::serial,
                               [&psi](std::size_t i) { return std::norm(psi[i]); });
    s.norm = s.p0 + s.p1 + s.p2;
    return s;
}

} // namespace

double DiscreteModel::recurrence_time_y() const { return 2.0 * std::numbers::pi / dy; }

double DiscreteModel::recurrence_time_z() const { return 2.0 * std::numbers::pi / dz; }

double DiscreteModel::recurrence_time() const {
    return std::min(recurrence_time_y(), recurrence_time_z());
}

double DiscreteModel::max_detuning() const {
    double m = 0.0;
    for (const Mode& y : y_modes) m = std::max(m, std::abs(y.omega - omega01));
    for (const Mode& z : z_modes) m = std::max(m, std::abs(z.omega - omega12));
    return m;
}

DiscreteModel discretize(const CascadeSystem& system, std::size_t ny, std::size_t nz,
                         Range y_range, Range z_range, const QuadratureOptions& opts) {
    if (ny == 0 || nz == 0) throw std::invalid_argument("discretize: need at least one mode");
    system.validate();
    check_range(system.density_y, y_range, "y", opts);
    check_range(system.density_z, z_range, "z", opts);
    DiscreteModel m;
    m.omega01 = system.omega01;
    m.omega12 = system.omega12;
    m.y_modes = sample_modes(system.density_y, ny, y_range, m.dy);
    m.z_modes = sample_modes(system.density_z, nz, z_range, m.dz);

    const PerturbedConstants k = perturbed_constant(system, opts);
    const double gy = k.gamma_tilde0.lambda * m.recurrence_time_y();
    const double gz = k.gamma1.lambda * m.recurrence_time_z();
    // With V = 0 nothing leaves x0 and there is nothing to recur.
    const bool y_ok = system.density_y.is_zero() || gy > recurrence_margin;
    if (!y_ok || !(gz > recurrence_margin)) {
        std::ostringstream msg;
        msg << "lambda~0 * T_rec,y = " << gy << " and lambda1 * T_rec,z = " << gz
            << " must both exceed " << recurrence_margin << "; refine the mode grids";
        throw NumericalError(ErrorKind::RecurrenceGuard, msg.str());
    }
    return m;
}

OracleRun evolve(const DiscreteModel& model, double T, double dt, const EvolveOptions& opts) {
    if (!(dt > 0.0) || !(T >= 0.0)) throw std::invalid_argument("evolve: need dt > 0, T >= 0");
    const double wmax = model.max_detuning();
    if (wmax > 0.0 && dt > 0.1 / wmax) {
        std::ostringstream msg;
        msg << "evolve: dt = " << dt << " exceeds 0.1 / max detuning = " << 0.1 / wmax;
        throw std::invalid_argument(msg.str());
    }
    if (T >= 0.5 * model.recurrence_time()) {
        std::ostringstream msg;
        msg << "T = " << T << " is not below half the recurrence time "
            << model.recurrence_time();
        throw NumericalError(ErrorKind::RecurrenceGuard, msg.str());
    }

    const std::size_t dim = model.dimension();
    std::vector<cplx> psi(dim, cplx{});
    psi[0] = 1.0;
    std::vector<cplx> k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
    Workspace w{std::vector<cplx>(model.ny()), std::vector<cplx>(model.nz()),
                std::vector<cplx>(model.ny())};
    const Execution exec = opts.exec;

    auto axpy = [&](const std::vector<cplx>& y, const std::vector<cplx>& k, double h) {
        if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static)
            for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(dim); ++i)
                tmp[static_cast<std::size_t>(i)] =
                    y[static_cast<std::size_t>(i)] + h * k[static_cast<std::size_t>(i)];
        } else {
            for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + h * k[i];
        }
    };

    OracleRun run;
    run.T = T;
    run.dt = dt;
    const std::size_t steps = static_cast<std::size_t>(std::llround(T / dt));
    auto record = [&](double t) {
        OracleSample s = sample(model, t, psi);
        const double err = std::abs(s.norm - 1.0);
        run.max_norm_error = std::max(run.max_norm_error, err);
        run.history.push_back(s);
        if (err > opts.norm_tolerance) {
            std::ostringstream msg;
            msg << "norm " << s.norm << " at t = " << t << " deviates beyond "
                << opts.norm_tolerance;
            throw NumericalError(ErrorKind::NormDrift, msg.str());
        }
    };
    record(0.0);
    const std::size_t every = std::max<std::size_t>(opts.sample_every, 1);
    for (std::size_t n = 0; n < steps; ++n) {
        const double t = static_cast<double>(n) * dt;
        derivative(model, t, psi.data(), k1.data(), w, exec);
        axpy(psi, k1, 0.5 * dt);
        derivative(model, t + 0.5 * dt, tmp.data(), k2.data(), w, exec);
        axpy(psi, k2, 0.5 * dt);
        derivative(model, t + 0.5 * dt, tmp.data(), k3.data(), w, exec);
        axpy(psi, k3, dt);
        derivative(model, t + dt, tmp.data(), k4.data(), w, exec);
        const double c = dt / 6.0;
        auto update = [&](std::size_t i) { psi[i] += c * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]); };
        if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static)
            for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(dim); ++i)
                update(static_cast<std::size_t>(i));
        } else {
            for (std::size_t i = 0; i < dim; ++i) update(i);
        }
        if ((n + 1) % every == 0 || n + 1 == steps) record(static_cast<double>(n + 1) * dt);
    }
    run.state = std::move(psi);
    return run;
}

DiscreteSpectrum extract_spectra(const OracleRun& run, const DiscreteModel& model) {
    DiscreteSpectrum s;
    s.ny = model.ny();
    s.nz = model.nz();
    const auto& psi = run.state;
    s.p0 = std::norm(psi[0]);
    for (std::size_t k = 0; k < s.ny; ++k) s.p1 += std::norm(psi[1 + k]);
    if (s.p1 > intermediate_limit) {
        std::ostringstream msg;
        msg << "intermediate population " << s.p1 << " at T = " << run.T << " exceeds "
            << intermediate_limit;
        throw NumericalError(ErrorKind::NotConverged, msg.str());
    }
    const double cell = model.dy * model.dz;
    s.joint.resize(s.ny * s.nz);
    s.marginal_y.assign(s.ny, 0.0);
    s.marginal_z.assign(s.nz, 0.0);
    for (std::size_t k = 0; k < s.ny; ++k) {
        for (std::size_t j = 0; j < s.nz; ++j) {
            const double p = std::norm(psi[1 + s.ny + k * s.nz + j]) / cell;
            s.joint[k * s.nz + j] = p;
            s.marginal_y[k] += p * model.dz;
            s.marginal_z[j] += p * model.dy;
        }
    }
    for (std::size_t k = 0; k < s.ny; ++k) s.emitted += s.marginal_y[k] * model.dy;
    return s;
}

std::vector<double> analytic_joint_on_modes(const CascadeSystem& system,
                                            const SpectralConstants& c,
                                            const DiscreteModel& model) {
    std::vector<double> out(model.ny() * model.nz());
    for (std::size_t k = 0; k < model.ny(); ++k)
        for (std::size_t j = 0; j < model.nz(); ++j)
            out[k * model.nz() + j] =
                joint_density(system, c, model.y_modes[k].omega, model.z_modes[j].omega);
    return out;
}

double relative_l1(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size())
        throw NumericalError(ErrorKind::GridMismatch, "relative_l1: size mismatch");
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += std::abs(a[i] - b[i]);
        den += std::abs(b[i]);
    }
    return den > 0.0 ? num / den : 0.0;
}

double step_doubling_deviation(const DiscreteModel& model, double T, double dt,
                               const EvolveOptions& opts) {
    const OracleRun fine = evolve(model, T, dt, opts);
    const OracleRun coarse = evolve(model, T, 2.0 * dt, opts);
    double dev = 0.0;
    for (std::size_t i = 0; i < fine.state.size(); ++i)
        dev = std::max(dev, std::abs(fine.state[i] - coarse.state[i]));
    return dev;
}

} // namespace cascade
