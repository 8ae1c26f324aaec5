#include "cascade/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <variant>

#include "cascade/errors.hpp"

namespace cascade {

namespace {

constexpr cplx I{0.0, 1.0};
constexpr double max_periods = 1e5;

// ∫_0^1 e^{a u} du and ∫_0^1 u e^{a u} du for a = -i theta.
void segment_moments(double theta, cplx& m0, cplx& m1) {
    const cplx a{0.0, -theta};
    if (std::abs(theta) < 0.5) {
        cplx term{1.0, 0.0}; // a^n / n!
        m0 = 0.0;
        m1 = 0.0;
        for (int n = 0; n < 24; ++n) {
            m0 += term / static_cast<double>(n + 1);
            m1 += term / static_cast<double>(n + 2);
            term *= a / static_cast<double>(n + 1);
        }
        return;
    }
    const cplx ea = std::exp(a);
    m0 = (ea - 1.0) / a;
    m1 = ea / a - (ea - 1.0) / (a * a);
}

cplx fourier_flat(const FlatWindow& f, double tau) {
    const double a = std::max(f.lo, 0.0);
    const double b = f.hi;
    if (!(b > a)) return {};
    const double m = 0.5 * (a + b);
    const double x = 0.5 * (b - a) * tau;
    const double sinc = std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x;
    return f.v0 * (b - a) * sinc * std::exp(-I * (m * tau));
}

cplx fourier_ohmic(const OhmicExp& f, double tau) {
    const cplx d{1.0 / f.cutoff, tau};
    return f.g2 / (d * d);
}

cplx fourier_tabulated(const SpectralDensity& density, const Tabulated& t, double tau) {
    std::vector<double> x;
    std::vector<double> y;
    if (t.omega.front() < 0.0) {
        if (t.omega.back() <= 0.0) return {};
        x.push_back(0.0);
        y.push_back(density(0.0));
    }
    for (std::size_t i = 0; i < t.omega.size(); ++i) {
        if (t.omega[i] > 0.0 || (t.omega[i] == 0.0 && x.empty())) {
            x.push_back(t.omega[i]);
            y.push_back(t.value[i]);
        }
    }
    cplx acc{};
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double d = x[i + 1] - x[i];
        cplx m0;
        cplx m1;
        segment_moments(d * tau, m0, m1);
        acc += d * std::exp(-I * (x[i] * tau)) * (y[i] * m0 + (y[i + 1] - y[i]) * m1);
    }
    return acc;
}

// Adaptive quadrature on [0, W] plus a two-term integration-by-parts tail.
cplx fourier_numeric(const SpectralDensity& density, double tau, const QuadratureOptions& opts) {
    if (tau == 0.0) return density.total_weight(opts).value;
    const double at = std::abs(tau);
    const double base = std::max(density.support_lo(), 0.0) + density.cutoff_scale();
    const double W = std::max(base + 200.0 * density.width(), base + 50.0 / at);
    const double periods = at * W / (2.0 * std::numbers::pi);
    if (periods > max_periods) {
        std::ostringstream msg;
        msg << "Fourier integral at tau = " << tau << " spans " << periods << " periods";
        throw NumericalError(ErrorKind::OscillationResolution, msg.str());
    }
    const std::size_t pieces = std::clamp<std::size_t>(static_cast<std::size_t>(periods), 1, 4000);
    std::vector<double> bps = density.breakpoints();
    for (std::size_t k = 1; k < pieces; ++k) bps.push_back(W * static_cast<double>(k) / pieces);

    RealFunction re = [&density, tau](double w) { return density(w) * std::cos(w * tau); };
    RealFunction im = [&density, tau](double w) { return -density(w) * std::sin(w * tau); };
    QuadratureOptions o = opts;
    o.atol = std::max(opts.atol, opts.rtol * density.sup() * density.width());
    o.max_subdivisions = std::max<std::size_t>(opts.max_subdivisions, 4 * pieces);
    cplx body;
    try {
        body = {integrate(re, 0.0, W, o, bps).value, integrate(im, 0.0, W, o, bps).value};
    } catch (const NumericalError& e) {
        throw NumericalError(ErrorKind::OscillationResolution, e.what());
    }
    const double fW = density(W);
    const double dh = 1e-6 * std::max(1.0, W);
    const double dfW = (density(W + dh) - density(W - dh)) / (2.0 * dh);
    const cplx phase = std::exp(-I * (W * tau));
    const cplx it = I * tau;
    return body + phase * (fW / it + dfW / (it * it));
}

} // namespace

cplx density_fourier(const SpectralDensity& density, double tau, const QuadratureOptions& opts) {
    if (density.is_zero()) return {};
    const DensityFamily& f = density.family();
    if (const auto* p = std::get_if<FlatWindow>(&f)) return fourier_flat(*p, tau);
    if (const auto* p = std::get_if<OhmicExp>(&f)) return fourier_ohmic(*p, tau);
    if (const auto* p = std::get_if<Tabulated>(&f)) return fourier_tabulated(density, *p, tau);
    return fourier_numeric(density, tau, opts);
}

MemoryKernel build_kernel(const SpectralDensity& density, double transition_energy,
                          cplx damping, double step, std::size_t count,
                          const QuadratureOptions& opts) {
    MemoryKernel k;
    k.transition_energy = transition_energy;
    k.density = density;
    k.damping = damping;
    k.step = step;
    if (density.is_zero() || count == 0) return k;
    k.samples.resize(count);
    for (std::size_t j = 0; j < count; ++j) {
        const double tau = static_cast<double>(j) * step;
        k.samples[j] = std::exp(-damping * tau) * std::exp(I * (transition_energy * tau)) *
                       density_fourier(density, tau, opts);
    }
    const double threshold = kernel_trim_ratio * std::abs(k.samples.front());
    std::size_t keep = count;
    while (keep > 1 && std::abs(k.samples[keep - 1]) < threshold) --keep;
    k.samples.resize(keep);
    return k;
}

std::string to_string(TraceMethod m) { return m == TraceMethod::volterra ? "volterra" : "markov"; }

AmplitudeTrace solve_volterra(const MemoryKernel& kernel, double T, const VolterraOptions& opts) {
    const double h = kernel.step;
    if (!(h > 0.0) || !(T >= 0.0)) throw std::invalid_argument("solve_volterra: need h > 0, T >= 0");
    const std::size_t n = static_cast<std::size_t>(std::llround(T / h));
    AmplitudeTrace tr;
    tr.step = h;
    tr.method = TraceMethod::volterra;
    tr.a0.assign(n + 1, cplx{});
    std::vector<cplx> deriv(n + 1, cplx{});
    tr.a0[0] = 1.0;
    const std::size_t L = kernel.samples.size();
    const cplx q0 = kernel.at(0);
    const cplx denom = 1.0 + 0.25 * h * h * q0;

    for (std::size_t m = 0; m < n; ++m) {
        const std::size_t next = m + 1;
        // G = h [ a_0 q_next / 2 + sum_{j=1}^{m} a_j q_{next-j} ]; q vanishes beyond L.
        const std::size_t jlo = next >= L ? next - L + 1 : 1;
        cplx G = chunked_sum<cplx>(std::max<std::size_t>(jlo, 1), m + 1, opts.exec,
                                   [&](std::size_t j) { return tr.a0[j] * kernel.samples[next - j]; });
        G += 0.5 * tr.a0[0] * kernel.at(next);
        G *= h;
        tr.a0[next] = (tr.a0[m] + 0.5 * h * (deriv[m] - G)) / denom;
        deriv[next] = -G - 0.5 * h * q0 * tr.a0[next];
    }

    if (opts.check_step && n > 0) {
        MemoryKernel fine = build_kernel(kernel.density, kernel.transition_energy, kernel.damping,
                                         0.5 * h, 2 * std::max<std::size_t>(L, 1));
        VolterraOptions o = opts;
        o.check_step = false;
        const AmplitudeTrace half = solve_volterra(fine, T, o);
        const double diff = std::abs(half.a0.back() - tr.a0.back());
        if (diff > opts.rtol * std::max(std::abs(half.a0.back()), 1e-300)) {
            std::ostringstream msg;
            msg << "halving h = " << h << " moves a0(T) by " << diff;
            throw NumericalError(ErrorKind::StepTooCoarse, msg.str());
        }
    }
    return tr;
}

AmplitudeTrace solve_volterra(const SpectralDensity& density, double transition_energy,
                              cplx damping, double T, double h, const VolterraOptions& opts) {
    const std::size_t n = static_cast<std::size_t>(std::llround(T / h)) + 1;
    return solve_volterra(build_kernel(density, transition_energy, damping, h, n), T, opts);
}

AmplitudeTrace markov_trace(const ComplexDecayConstant& gamma, double T, double h) {
    if (!(h > 0.0) || !(T >= 0.0)) throw std::invalid_argument("markov_trace: need h > 0, T >= 0");
    const std::size_t n = static_cast<std::size_t>(std::llround(T / h));
    AmplitudeTrace tr;
    tr.step = h;
    tr.method = TraceMethod::markov;
    tr.a0.resize(n + 1);
    const cplx g = gamma.value();
    for (std::size_t k = 0; k <= n; ++k) tr.a0[k] = std::exp(-g * (static_cast<double>(k) * h));
    return tr;
}

TraceDeviation compare_traces(const AmplitudeTrace& a, const AmplitudeTrace& b, double t_min,
                              double t_max) {
    if (a.step != b.step) {
        std::ostringstream msg;
        msg << "trace steps differ: " << a.step << " vs " << b.step;
        throw NumericalError(ErrorKind::GridMismatch, msg.str());
    }
    TraceDeviation d;
    double num = 0.0;
    double den = 0.0;
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t k = 0; k < n; ++k) {
        const double t = a.time(k);
        if (t < t_min || t > t_max) continue;
        const double ma = std::abs(a.a0[k]);
        const double mb = std::abs(b.a0[k]);
        const double diff = std::abs(ma - mb);
        if (mb > 0.0) d.sup_relative = std::max(d.sup_relative, diff / mb);
        d.sup_complex = std::max(d.sup_complex, std::abs(a.a0[k] - b.a0[k]));
        num += diff * diff;
        den += mb * mb;
        ++d.samples;
    }
    d.l2_relative = den > 0.0 ? std::sqrt(num / den) : 0.0;
    return d;
}

double observed_order(const AmplitudeTrace& h1, const AmplitudeTrace& h2,
                      const AmplitudeTrace& h4) {
    if (std::abs(h2.step * 2.0 - h1.step) > 1e-12 * h1.step ||
        std::abs(h4.step * 4.0 - h1.step) > 1e-12 * h1.step)
        throw NumericalError(ErrorKind::GridMismatch, "observed_order needs steps h, h/2, h/4");
    double e12 = 0.0;
    double e24 = 0.0;
    for (std::size_t k = 0; k < h1.size(); ++k) {
        if (2 * k >= h2.size() || 4 * k >= h4.size()) break;
        e12 = std::max(e12, std::abs(h1.a0[k] - h2.a0[2 * k]));
        e24 = std::max(e24, std::abs(h2.a0[2 * k] - h4.a0[4 * k]));
    }
    if (e24 == 0.0) return std::numeric_limits<double>::infinity();
    return std::log2(e12 / e24);
}

} // namespace cascade
