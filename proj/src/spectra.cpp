#include "cascade/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "cascade/convolution.hpp"
#include "cascade/errors.hpp"

namespace cascade {

namespace {

constexpr std::size_t row_chunk = 64;

void trapezoid_weights(Axis& a) {
    const std::size_t n = a.nodes.size();
    a.weights.assign(n, 0.0);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double h = a.nodes[k + 1] - a.nodes[k];
        a.weights[k] += 0.5 * h;
        a.weights[k + 1] += 0.5 * h;
    }
}

void seal(SpectrumGrid1D& s) {
    s.mass = 0.0;
    for (std::size_t k = 0; k < s.value.size(); ++k) s.mass += s.axis.weights[k] * s.value[k];
}

// Upper edge used when a density has unbounded support.
double effective_hi(const SpectralDensity& d) {
    const double hi = d.support_hi();
    if (std::isfinite(hi)) return hi;
    return d.support_lo() + 40.0 * d.cutoff_scale();
}

double lorentz(double x, double hw) { return hw / (std::numbers::pi * (hw * hw + x * x)); }

} // namespace

std::string to_string(SpectrumTag tag) {
    switch (tag) {
        case SpectrumTag::joint: return "joint";
        case SpectrumTag::y_numeric: return "y_numeric";
        case SpectrumTag::y_closed: return "y_closed";
        case SpectrumTag::z_numeric: return "z_numeric";
        case SpectrumTag::z_closed: return "z_closed";
        case SpectrumTag::sum_numeric: return "sum_numeric";
        case SpectrumTag::sum_closed: return "sum_closed";
    }
    return "unknown";
}

double Axis::max_step_in(double lo, double hi) const {
    double m = 0.0;
    for (std::size_t k = 0; k + 1 < nodes.size(); ++k)
        if (nodes[k + 1] >= lo && nodes[k] <= hi) m = std::max(m, nodes[k + 1] - nodes[k]);
    return m;
}

Axis graded_axis(double lo, double hi, double center, double fine_step, double fine_span,
                 double growth, double max_step, const std::vector<double>& extra) {
    if (!(hi > lo) || !(fine_step > 0.0) || !(growth >= 1.0) || !(max_step > 0.0))
        throw std::invalid_argument("graded_axis: bad parameters");
    std::vector<double> pts{lo, hi};
    if (center >= lo && center <= hi) pts.push_back(center);
    for (int side : {+1, -1}) {
        double x = center;
        double step = fine_step;
        while (side > 0 ? x < hi : x > lo) {
            x += side * step;
            if (x > lo && x < hi) pts.push_back(x);
            if (std::abs(x - center) >= fine_span) step = std::min(step * growth, max_step);
        }
    }
    for (double e : extra)
        if (e > lo && e < hi) pts.push_back(e);
    std::sort(pts.begin(), pts.end());
    Axis a;
    const double tiny = 1e-12 * (hi - lo);
    for (double p : pts)
        if (a.nodes.empty() || p - a.nodes.back() > tiny) a.nodes.push_back(p);
    if (a.nodes.back() != hi) a.nodes.back() = hi;
    trapezoid_weights(a);
    return a;
}

SpectralConstants spectral_constants(const CascadeSystem& system, const PerturbedConstants& k) {
    SpectralConstants c;
    c.lambda_tilde0 = k.gamma_tilde0.lambda;
    c.lambda1 = k.gamma1.lambda;
    c.bar = corrected_energies(system, k);
    return c;
}

double joint_density(const CascadeSystem& system, const SpectralConstants& c, double wy,
                     double wz) {
    const double v = system.density_y(wy);
    if (v == 0.0) return 0.0;
    const double w = system.density_z(wz);
    if (w == 0.0) return 0.0;
    const double a = wy + wz - c.bar.bar02;
    const double b = wz - c.bar.bar12;
    return v * w /
           ((c.lambda_tilde0 * c.lambda_tilde0 + a * a) * (c.lambda1 * c.lambda1 + b * b));
}

SpectrumGrid2D joint_spectrum(const CascadeSystem& system, const SpectralConstants& c,
                              const GridSpec& spec, Execution exec) {
    if (!(c.lambda_tilde0 > 0.0) || !(c.lambda1 > 0.0))
        throw std::invalid_argument("joint_spectrum: need lambda~0 > 0 and lambda1 > 0");
    const SpectralDensity& V = system.density_y;
    const SpectralDensity& W = system.density_z;

    const double z_lo = W.support_lo();
    const double z_hi = spec.omega_max > 0.0 ? std::min(effective_hi(W), spec.omega_max)
                                             : effective_hi(W);
    const double s_lo = V.support_lo() + z_lo;
    const double s_hi = spec.omega_max > 0.0 ? std::min(effective_hi(V) + z_hi, spec.omega_max)
                                             : effective_hi(V) + z_hi;
    const double z_max_step = spec.max_step > 0.0 ? spec.max_step : (z_hi - z_lo) / 100.0;
    const double s_max_step = spec.max_step > 0.0 ? spec.max_step : (s_hi - s_lo) / 100.0;

    std::vector<double> z_extra = W.breakpoints();
    std::vector<double> s_extra = V.breakpoints();
    for (double b : W.breakpoints()) s_extra.push_back(b + V.support_lo());

    SpectrumGrid2D g;
    g.omega_z = graded_axis(z_lo, z_hi, c.bar.bar12, spec.fine_fraction * c.lambda1,
                            spec.fine_halfwidths * c.lambda1, spec.growth, z_max_step, z_extra);
    g.omega_sum =
        graded_axis(s_lo, s_hi, c.bar.bar02, spec.fine_fraction * c.lambda_tilde0,
                    spec.fine_halfwidths * c.lambda_tilde0, spec.growth, s_max_step, s_extra);

    const double ridge_step = g.omega_sum.max_step_in(c.bar.bar02 - c.lambda_tilde0,
                                                      c.bar.bar02 + c.lambda_tilde0);
    if (ridge_step > c.lambda_tilde0 / 5.0) {
        std::ostringstream msg;
        msg << "Omega step " << ridge_step << " near bar02 exceeds lambda~0/5 = "
            << c.lambda_tilde0 / 5.0;
        throw NumericalError(ErrorKind::GridTooCoarse, msg.str());
    }

    const std::size_t ns = g.omega_sum.size();
    const std::size_t nz = g.omega_z.size();
    g.value.assign(ns * nz, 0.0);
    auto row = [&](std::size_t j) {
        const double z = g.omega_z.nodes[j];
        double* out = g.value.data() + j * ns;
        double acc = 0.0;
        for (std::size_t i = 0; i < ns; ++i) {
            out[i] = joint_density(system, c, g.omega_sum.nodes[i] - z, z);
            acc += g.omega_sum.weights[i] * out[i];
        }
        return acc * g.omega_z.weights[j];
    };
    g.mass = chunked_sum<double>(0, nz, exec, row);
    return g;
}

Axis y_axis(const CascadeSystem& system, const SpectralConstants& c, const GridSpec& spec) {
    const SpectralDensity& V = system.density_y;
    const double lo = V.support_lo();
    const double hi = spec.omega_max > 0.0 ? std::min(effective_hi(V), spec.omega_max)
                                           : effective_hi(V);
    const double w = c.lambda_tilde0 + c.lambda1;
    const double max_step = spec.max_step > 0.0 ? spec.max_step : (hi - lo) / 100.0;
    return graded_axis(lo, hi, c.bar.bar01, spec.fine_fraction * w, spec.fine_halfwidths * w,
                       spec.growth, max_step, V.breakpoints());
}

SpectrumGrid1D marginal_z(const SpectrumGrid2D& joint) {
    SpectrumGrid1D s;
    s.axis = joint.omega_z;
    s.tag = SpectrumTag::z_numeric;
    const std::size_t ns = joint.omega_sum.size();
    s.value.assign(joint.omega_z.size(), 0.0);
    for (std::size_t j = 0; j < joint.omega_z.size(); ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < ns; ++i) acc += joint.omega_sum.weights[i] * joint.at(i, j);
        s.value[j] = acc;
    }
    seal(s);
    return s;
}

SpectrumGrid1D sum_energy(const SpectrumGrid2D& joint) {
    SpectrumGrid1D s;
    s.axis = joint.omega_sum;
    s.tag = SpectrumTag::sum_numeric;
    s.value.assign(joint.omega_sum.size(), 0.0);
    for (std::size_t j = 0; j < joint.omega_z.size(); ++j) {
        const double wz = joint.omega_z.weights[j];
        for (std::size_t i = 0; i < joint.omega_sum.size(); ++i) s.value[i] += wz * joint.at(i, j);
    }
    seal(s);
    return s;
}

SpectrumGrid1D marginal_y(const SpectrumGrid2D& joint, const Axis& y) {
    SpectrumGrid1D s;
    s.axis = y;
    s.tag = SpectrumTag::y_numeric;
    const std::size_t ny = y.size();
    const std::size_t ns = joint.omega_sum.size();
    const std::size_t nz = joint.omega_z.size();
    std::vector<double> deposit(ny, 0.0);
    for (std::size_t j0 = 0; j0 < nz; j0 += row_chunk) {
        const std::size_t j1 = std::min(nz, j0 + row_chunk);
        for (std::size_t j = j0; j < j1; ++j) {
            const double z = joint.omega_z.nodes[j];
            const double wz = joint.omega_z.weights[j];
            for (std::size_t i = 0; i < ns; ++i) {
                const double p = joint.at(i, j);
                if (p == 0.0) continue;
                const double m = wz * joint.omega_sum.weights[i] * p;
                const double yy = joint.omega_sum.nodes[i] - z;
                if (yy <= y.nodes.front()) {
                    deposit.front() += m;
                    continue;
                }
                if (yy >= y.nodes.back()) {
                    deposit.back() += m;
                    continue;
                }
                const auto it = std::upper_bound(y.nodes.begin(), y.nodes.end(), yy);
                const std::size_t k = static_cast<std::size_t>(it - y.nodes.begin()) - 1;
                const double t = (yy - y.nodes[k]) / (y.nodes[k + 1] - y.nodes[k]);
                deposit[k] += m * (1.0 - t);
                deposit[k + 1] += m * t;
            }
        }
    }
    s.value.resize(ny);
    s.mass = 0.0;
    for (std::size_t k = 0; k < ny; ++k) {
        s.value[k] = y.weights[k] > 0.0 ? deposit[k] / y.weights[k] : 0.0;
        s.mass += deposit[k];
    }
    return s;
}

SpectrumGrid1D marginal_y_closed(const CascadeSystem& system, const SpectralConstants& c,
                                 const Axis& y) {
    SpectrumGrid1D s;
    s.axis = y;
    s.tag = SpectrumTag::y_closed;
    const double w = c.lambda_tilde0 + c.lambda1;
    s.value.resize(y.size());
    for (std::size_t k = 0; k < y.size(); ++k) {
        const double wy = y.nodes[k];
        s.value[k] = std::numbers::pi * system.density_y(wy) / c.lambda_tilde0 *
                     lorentz(wy - c.bar.bar01, w);
    }
    seal(s);
    return s;
}

SpectrumGrid1D marginal_z_closed(const CascadeSystem& system, const SpectralConstants& c,
                                 const Axis& z) {
    SpectrumGrid1D s;
    s.axis = z;
    s.tag = SpectrumTag::z_closed;
    s.value.resize(z.size());
    for (std::size_t k = 0; k < z.size(); ++k) {
        const double wz = z.nodes[k];
        s.value[k] = std::numbers::pi * system.density_y(c.bar.bar02 - wz) / c.lambda_tilde0 *
                     lorentz(wz - c.bar.bar12, c.lambda1);
    }
    seal(s);
    return s;
}

SpectrumGrid1D sum_energy_closed(const CascadeSystem& system, const SpectralConstants& c,
                                 const Axis& omega, const QuadratureOptions& opts,
                                 Execution exec) {
    SpectrumGrid1D s;
    s.axis = omega;
    s.tag = SpectrumTag::sum_closed;
    const std::size_t n = omega.size();
    s.value.assign(n, 0.0);
    std::vector<std::exception_ptr> failures(n);
    auto point = [&](std::size_t k) {
        try {
            const double W = omega.nodes[k];
            if (W <= 0.0) return;
            const double S = lorentzian_absorptive_below(system.density_y, W - c.bar.bar12,
                                                         c.lambda1, W, opts)
                                 .value /
                             std::numbers::pi;
            const double d = W - c.bar.bar02;
            s.value[k] = S / (c.lambda_tilde0 * c.lambda_tilde0 + d * d);
        } catch (...) {
            failures[k] = std::current_exception();
        }
    };
    if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 16)
        for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(n); ++k)
            point(static_cast<std::size_t>(k));
    } else {
        for (std::size_t k = 0; k < n; ++k) point(k);
    }
    for (const auto& e : failures)
        if (e) std::rethrow_exception(e);
    seal(s);
    return s;
}

double relative_l1(const SpectrumGrid1D& a, const SpectrumGrid1D& b) {
    if (a.axis.nodes != b.axis.nodes)
        throw NumericalError(ErrorKind::GridMismatch, "relative_l1 needs a common axis");
    double num = 0.0;
    double den = 0.0;
    for (std::size_t k = 0; k < a.value.size(); ++k) {
        num += b.axis.weights[k] * std::abs(a.value[k] - b.value[k]);
        den += b.axis.weights[k] * std::abs(b.value[k]);
    }
    return den > 0.0 ? num / den : 0.0;
}

double fwhm(const SpectrumGrid1D& s) {
    const auto& x = s.axis.nodes;
    const auto& y = s.value;
    const std::size_t n = y.size();
    if (n < 3) throw NumericalError(ErrorKind::NoPeak, "spectrum has fewer than 3 samples");
    const std::size_t k = static_cast<std::size_t>(std::max_element(y.begin(), y.end()) - y.begin());
    if (k == 0 || k == n - 1 || !(y[k] > 0.0))
        throw NumericalError(ErrorKind::NoPeak, "maximum at the axis boundary");
    const double half = 0.5 * y[k];
    std::size_t l = k;
    while (l > 0 && y[l] >= half) --l;
    std::size_t r = k;
    while (r + 1 < n && y[r] >= half) ++r;
    if (y[l] >= half || y[r] >= half)
        throw NumericalError(ErrorKind::NoPeak, "half maximum not crossed on both sides");
    const double xl = x[l] + (half - y[l]) * (x[l + 1] - x[l]) / (y[l + 1] - y[l]);
    const double xr = x[r - 1] + (half - y[r - 1]) * (x[r] - x[r - 1]) / (y[r] - y[r - 1]);
    return xr - xl;
}

std::string to_string(Regime r) {
    switch (r) {
        case Regime::lorentzian: return "1";
        case Regime::deformed: return "2";
        case Regime::continuous: return "3";
        case Regime::unclassified: return "unclassified";
    }
    return "unclassified";
}

Regime classify_regime(double lambda1, double bar01) {
    if (bar01 < 0.0) return Regime::continuous;
    if (bar01 == 0.0) return Regime::unclassified;
    const double r = lambda1 / bar01;
    if (r < 0.1) return Regime::lorentzian;
    if (r <= 10.0) return Regime::deformed;
    return Regime::unclassified;
}

} // namespace cascade
