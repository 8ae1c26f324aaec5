#include "cascade/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "cascade/errors.hpp"

namespace cascade {

namespace {

// QUADPACK dqk21 abscissae and weights.
constexpr std::array<double, 11> xgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
constexpr std::array<double, 11> wgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> wg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

constexpr double eps = std::numeric_limits<double>::epsilon();

struct Segment {
    double a;
    double b;
    PanelEstimate est;
};

bool error_less(const Segment& x, const Segment& y) { return x.est.error < y.est.error; }

double roundoff_floor(const PanelEstimate& e) { return 50.0 * eps * e.abs_value; }

std::vector<double> sorted_interior(std::span<const double> pts, double a, double b) {
    std::vector<double> out;
    for (double p : pts)
        if (p > a && p < b && std::isfinite(p)) out.push_back(p);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// Integrand on [lo, X + 1): identity up to X, then the tail map.
struct SemiInfiniteMap {
    const RealFunction* f;
    double X;
    double scale;

    double operator()(double t) const {
        if (t <= X) return (*f)(t);
        const double u = t - X;
        const double one_minus = 1.0 - u;
        if (one_minus <= 0.0) return 0.0;
        const double x = X + scale * u / one_minus;
        if (!std::isfinite(x)) return 0.0;
        return (*f)(x) * scale / (one_minus * one_minus);
    }
};

double finite_end(double lo, const IntegrandHints& hints, const QuadratureOptions& opts) {
    double top = lo;
    for (double p : hints.breakpoints)
        if (std::isfinite(p)) top = std::max(top, p);
    const double scale = hints.scale > 0.0 ? hints.scale : 1.0;
    return top + opts.tail_multiple * scale;
}

} // namespace

PanelEstimate gauss_kronrod21(const RealFunction& f, double a, double b) {
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double abs_half = std::abs(half);

    std::array<double, 10> fv1{};
    std::array<double, 10> fv2{};
    double resg = 0.0;
    const double fc = f(centre);
    double resk = wgk[10] * fc;
    double resabs = std::abs(resk);
    for (int j = 0; j < 10; ++j) {
        const double absc = half * xgk[j];
        const double f1 = f(centre - absc);
        const double f2 = f(centre + absc);
        fv1[j] = f1;
        fv2[j] = f2;
        const double fsum = f1 + f2;
        resk += wgk[j] * fsum;
        resabs += wgk[j] * (std::abs(f1) + std::abs(f2));
        if (j % 2 == 1) resg += wg[j / 2] * fsum;
    }
    const double reskh = 0.5 * resk;
    double resasc = wgk[10] * std::abs(fc - reskh);
    for (int j = 0; j < 10; ++j)
        resasc += wgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));

    PanelEstimate out{};
    out.value = resk * half;
    resabs *= abs_half;
    resasc *= abs_half;
    double err = std::abs((resk - resg) * half);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    if (resabs > std::numeric_limits<double>::min() / (50.0 * eps))
        err = std::max(50.0 * eps * resabs, err);
    out.error = err;
    out.abs_value = resabs;
    return out;
}

QuadratureResult integrate(const RealFunction& f, double a, double b,
                           const QuadratureOptions& opts,
                           std::span<const double> breakpoints) {
    if (a == b) return {};
    if (b < a) {
        QuadratureResult r = integrate(f, b, a, opts, breakpoints);
        r.value = -r.value;
        return r;
    }

    std::vector<double> nodes{a};
    for (double p : sorted_interior(breakpoints, a, b)) nodes.push_back(p);
    nodes.push_back(b);

    std::vector<Segment> active;
    std::vector<Segment> frozen;
    std::size_t evaluations = 0;
    double value = 0.0;
    double error = 0.0;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        Segment s{nodes[i], nodes[i + 1], gauss_kronrod21(f, nodes[i], nodes[i + 1])};
        evaluations += 21;
        value += s.est.value;
        error += s.est.error;
        active.push_back(s);
    }
    std::make_heap(active.begin(), active.end(), error_less);

    auto tolerance = [&](double v) { return std::max(opts.atol, opts.rtol * std::abs(v)); };

    std::size_t splits = 0;
    while (!active.empty() && error > tolerance(value) && splits < opts.max_subdivisions) {
        std::pop_heap(active.begin(), active.end(), error_less);
        Segment worst = active.back();
        active.pop_back();

        const double mid = 0.5 * (worst.a + worst.b);
        const double width = worst.b - worst.a;
        const double mag = std::max({std::abs(worst.a), std::abs(worst.b), 1e-300});
        if (width <= 64.0 * eps * mag || mid <= worst.a || mid >= worst.b ||
            worst.est.error <= roundoff_floor(worst.est)) {
            frozen.push_back(worst);
            continue;
        }
        Segment left{worst.a, mid, gauss_kronrod21(f, worst.a, mid)};
        Segment right{mid, worst.b, gauss_kronrod21(f, mid, worst.b)};
        evaluations += 42;
        ++splits;
        value += left.est.value + right.est.value - worst.est.value;
        error += left.est.error + right.est.error - worst.est.error;
        active.push_back(left);
        std::push_heap(active.begin(), active.end(), error_less);
        active.push_back(right);
        std::push_heap(active.begin(), active.end(), error_less);
    }

    // Exact totals in left-to-right order.
    std::vector<Segment> all = std::move(active);
    all.insert(all.end(), frozen.begin(), frozen.end());
    std::sort(all.begin(), all.end(), [](const Segment& x, const Segment& y) { return x.a < y.a; });
    QuadratureResult out;
    double floor_total = 0.0;
    for (const Segment& s : all) {
        out.value += s.est.value;
        out.error_estimate += s.est.error;
        floor_total += roundoff_floor(s.est);
    }
    out.evaluations = evaluations;

    if (!std::isfinite(out.value) || !std::isfinite(out.error_estimate)) {
        std::ostringstream msg;
        msg << "non-finite integral on [" << a << ", " << b << "]";
        throw NumericalError(ErrorKind::NonIntegrable, msg.str());
    }
    if (out.error_estimate > tolerance(out.value) && out.error_estimate > 10.0 * floor_total) {
        std::ostringstream msg;
        msg << "integral on [" << a << ", " << b << "] = " << out.value << " with error "
            << out.error_estimate << " after " << splits << " subdivisions";
        throw NumericalError(ErrorKind::NoConvergence, msg.str());
    }
    return out;
}

QuadratureResult integrate_semi_infinite(const RealFunction& f, double lo,
                                         const IntegrandHints& hints,
                                         const QuadratureOptions& opts) {
    const double X = finite_end(lo, hints, opts);
    const double scale = hints.scale > 0.0 ? hints.scale : 1.0;
    SemiInfiniteMap g{&f, X, scale};
    std::vector<double> bps = hints.breakpoints;
    bps.push_back(X);
    return integrate(std::cref(g), lo, X + 1.0, opts, bps);
}

QuadratureResult principal_value(const RealFunction& f, double pole, double lo,
                                 const IntegrandHints& hints,
                                 const QuadratureOptions& opts) {
    const double resolution = 1e-10 * std::max(1.0, std::abs(pole));
    for (double d : hints.discontinuities) {
        if (std::abs(d - pole) <= resolution) {
            std::ostringstream msg;
            msg << "pole " << pole << " coincides with a discontinuity at " << d;
            throw NumericalError(ErrorKind::PoleOnSupportBoundary, msg.str());
        }
    }

    if (pole <= lo) {
        RealFunction g = [&f, pole](double x) { return f(x) / (x - pole); };
        return integrate_semi_infinite(g, lo, hints, opts);
    }

    // Folded part on s in (0, R), then the direct integrand from x0 = pole + R.
    const double R = pole - lo;
    const double x0 = pole + R;
    const double X = std::max(finite_end(x0, hints, opts), x0);
    const double scale = hints.scale > 0.0 ? hints.scale : 1.0;

    RealFunction direct = [&f, pole](double x) { return f(x) / (x - pole); };
    SemiInfiniteMap tail{&direct, X, scale};

    auto composite = [&](double t) {
        if (t < R) return (f(pole + t) - f(pole - t)) / t;
        return tail(x0 + (t - R));
    };

    std::vector<double> bps{R, R + (X - x0)};
    for (double b : hints.breakpoints) {
        const double s = std::abs(b - pole);
        if (s > 0.0 && s < R) bps.push_back(s);
        if (b > x0 && b < X) bps.push_back(R + (b - x0));
    }
    return integrate(composite, 0.0, R + (X - x0) + 1.0, opts, bps);
}

} // namespace cascade
