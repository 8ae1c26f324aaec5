#include "cascade/densities.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "cascade/errors.hpp"

namespace cascade {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
}

void validate(const DensityFamily& family) {
    std::visit(overloaded{
                   [](const FlatWindow& f) {
                       require(std::isfinite(f.v0) && f.v0 >= 0.0, "FlatWindow: v0 must be >= 0");
                       require(std::isfinite(f.lo) && std::isfinite(f.hi) && f.lo < f.hi,
                               "FlatWindow: need lo < hi");
                   },
                   [](const OhmicExp& f) {
                       require(std::isfinite(f.g2) && f.g2 >= 0.0, "OhmicExp: g2 must be >= 0");
                       require(std::isfinite(f.cutoff) && f.cutoff > 0.0,
                               "OhmicExp: cutoff must be > 0");
                   },
                   [](const ShiftedLorentzian& f) {
                       require(std::isfinite(f.amplitude) && f.amplitude >= 0.0,
                               "ShiftedLorentzian: amplitude must be >= 0");
                       require(std::isfinite(f.center), "ShiftedLorentzian: center must be finite");
                       require(std::isfinite(f.width) && f.width > 0.0,
                               "ShiftedLorentzian: width must be > 0");
                   },
                   [](const Tabulated& f) {
                       require(f.omega.size() >= 2 && f.omega.size() == f.value.size(),
                               "Tabulated: need at least two (omega, value) pairs");
                       for (std::size_t i = 0; i < f.omega.size(); ++i) {
                           require(std::isfinite(f.omega[i]) && std::isfinite(f.value[i]),
                                   "Tabulated: non-finite entry");
                           require(f.value[i] >= 0.0, "Tabulated: negative value");
                           if (i > 0)
                               require(f.omega[i] > f.omega[i - 1],
                                       "Tabulated: omega must be strictly increasing");
                       }
                   },
               },
               family);
}

} // namespace

SpectralDensity::SpectralDensity() : family_(FlatWindow{0.0, 0.0, 1.0}) {}

SpectralDensity::SpectralDensity(DensityFamily family, double weight_bound)
    : family_(std::move(family)) {
    validate(family_);
    const QuadratureResult w = total_weight();
    if (!(w.value <= weight_bound)) {
        std::ostringstream msg;
        msg << family_name() << ": total weight " << w.value << " exceeds bound " << weight_bound;
        throw std::invalid_argument(msg.str());
    }
}

SpectralDensity SpectralDensity::from_csv(const std::string& path, double weight_bound) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open density table " + path);
    Tabulated t;
    std::string line;
    std::getline(in, line); // header
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double w = 0.0;
        double v = 0.0;
        if (!(row >> w >> v)) {
            std::ostringstream msg;
            msg << path << ":" << lineno << ": expected two numbers";
            throw std::invalid_argument(msg.str());
        }
        t.omega.push_back(w);
        t.value.push_back(v);
    }
    return SpectralDensity(std::move(t), weight_bound);
}

double SpectralDensity::evaluate(double omega) const {
    if (!(omega >= 0.0)) return 0.0;
    return std::visit(
        overloaded{
            [omega](const FlatWindow& f) {
                return (omega >= f.lo && omega <= f.hi) ? f.v0 : 0.0;
            },
            [omega](const OhmicExp& f) { return f.g2 * omega * std::exp(-omega / f.cutoff); },
            [omega](const ShiftedLorentzian& f) {
                const double d = omega - f.center;
                return f.amplitude / std::numbers::pi * f.width / (f.width * f.width + d * d);
            },
            [omega](const Tabulated& f) {
                if (omega < f.omega.front() || omega > f.omega.back()) return 0.0;
                auto it = std::upper_bound(f.omega.begin(), f.omega.end(), omega);
                if (it == f.omega.end()) return f.value.back();
                const std::size_t i = static_cast<std::size_t>(it - f.omega.begin()) - 1;
                const double x0 = f.omega[i];
                const double x1 = f.omega[i + 1];
                const double t = (omega - x0) / (x1 - x0);
                return f.value[i] + t * (f.value[i + 1] - f.value[i]);
            },
        },
        family_);
}

std::string SpectralDensity::family_name() const {
    return std::visit(overloaded{
                          [](const FlatWindow&) { return std::string("FlatWindow"); },
                          [](const OhmicExp&) { return std::string("OhmicExp"); },
                          [](const ShiftedLorentzian&) { return std::string("ShiftedLorentzian"); },
                          [](const Tabulated&) { return std::string("Tabulated"); },
                      },
                      family_);
}

double SpectralDensity::cutoff_scale() const {
    return std::visit(overloaded{
                          [](const FlatWindow& f) { return f.hi; },
                          [](const OhmicExp& f) { return f.cutoff; },
                          [](const ShiftedLorentzian& f) {
                              return std::max(f.center, 0.0) + f.width;
                          },
                          [](const Tabulated& f) { return f.omega.back(); },
                      },
                      family_);
}

double SpectralDensity::width() const {
    return std::visit(overloaded{
                          [](const FlatWindow& f) { return f.hi - std::max(f.lo, 0.0); },
                          [](const OhmicExp& f) { return f.cutoff; },
                          [](const ShiftedLorentzian& f) { return f.width; },
                          [](const Tabulated& f) {
                              return f.omega.back() - std::max(f.omega.front(), 0.0);
                          },
                      },
                      family_);
}

double SpectralDensity::support_lo() const {
    return std::visit(overloaded{
                          [](const FlatWindow& f) { return std::max(f.lo, 0.0); },
                          [](const OhmicExp&) { return 0.0; },
                          [](const ShiftedLorentzian&) { return 0.0; },
                          [](const Tabulated& f) { return std::max(f.omega.front(), 0.0); },
                      },
                      family_);
}

double SpectralDensity::support_hi() const {
    return std::visit(overloaded{
                          [](const FlatWindow& f) { return std::max(f.hi, 0.0); },
                          [](const OhmicExp&) { return inf; },
                          [](const ShiftedLorentzian&) { return inf; },
                          [](const Tabulated& f) { return std::max(f.omega.back(), 0.0); },
                      },
                      family_);
}

double SpectralDensity::sup() const {
    return std::visit(
        overloaded{
            [](const FlatWindow& f) { return f.hi >= 0.0 ? f.v0 : 0.0; },
            [](const OhmicExp& f) { return f.g2 * f.cutoff / std::numbers::e; },
            [this](const ShiftedLorentzian& f) {
                return evaluate(std::max(f.center, 0.0));
            },
            [this](const Tabulated& f) {
                double m = 0.0;
                for (std::size_t i = 0; i < f.omega.size(); ++i)
                    if (f.omega[i] >= 0.0) m = std::max(m, f.value[i]);
                if (f.omega.front() < 0.0) m = std::max(m, evaluate(0.0));
                return m;
            },
        },
        family_);
}

bool SpectralDensity::is_zero() const { return sup() == 0.0; }

std::vector<double> SpectralDensity::breakpoints() const {
    std::vector<double> out = std::visit(
        overloaded{
            [](const FlatWindow& f) { return std::vector<double>{f.lo, f.hi}; },
            [](const OhmicExp& f) { return std::vector<double>{f.cutoff}; },
            [](const ShiftedLorentzian& f) {
                return std::vector<double>{f.center - f.width, f.center, f.center + f.width};
            },
            [](const Tabulated& f) { return f.omega; },
        },
        family_);
    std::erase_if(out, [](double x) { return !(x > 0.0); });
    return out;
}

std::vector<double> SpectralDensity::discontinuities() const {
    std::vector<double> out;
    std::visit(overloaded{
                   [&](const FlatWindow& f) {
                       if (f.v0 == 0.0) return;
                       if (f.lo >= 0.0) out.push_back(f.lo);
                       else if (f.hi > 0.0) out.push_back(0.0);
                       if (f.hi >= 0.0) out.push_back(f.hi);
                   },
                   [&](const OhmicExp&) {},
                   [&](const ShiftedLorentzian& f) {
                       if (f.amplitude > 0.0) out.push_back(0.0);
                   },
                   [&](const Tabulated& f) {
                       if (f.omega.front() >= 0.0 && f.value.front() > 0.0)
                           out.push_back(f.omega.front());
                       if (f.omega.front() < 0.0 && f.omega.back() > 0.0 && evaluate(0.0) > 0.0)
                           out.push_back(0.0);
                       if (f.omega.back() >= 0.0 && f.value.back() > 0.0)
                           out.push_back(f.omega.back());
                   },
               },
               family_);
    return out;
}

IntegrandHints SpectralDensity::hints() const {
    IntegrandHints h;
    h.scale = width() > 0.0 ? width() : 1.0;
    h.breakpoints = breakpoints();
    h.discontinuities = discontinuities();
    return h;
}

SpectralDensity SpectralDensity::scaled(double c) const {
    if (!(c >= 0.0) || !std::isfinite(c))
        throw std::invalid_argument("density scale factor must be finite and >= 0");
    DensityFamily f = std::visit(
        overloaded{
            [c](FlatWindow x) -> DensityFamily { x.v0 *= c; return x; },
            [c](OhmicExp x) -> DensityFamily { x.g2 *= c; return x; },
            [c](ShiftedLorentzian x) -> DensityFamily { x.amplitude *= c; return x; },
            [c](Tabulated x) -> DensityFamily {
                for (double& v : x.value) v *= c;
                return x;
            },
        },
        family_);
    return SpectralDensity(std::move(f), inf);
}

QuadratureResult SpectralDensity::total_weight(const QuadratureOptions& opts) const {
    if (is_zero()) return {};
    RealFunction f = [this](double w) { return evaluate(w); };
    const double lo = support_lo();
    const double hi = support_hi();
    const IntegrandHints h = hints();
    try {
        if (std::isfinite(hi)) return integrate(f, lo, hi, opts, h.breakpoints);
        return integrate_semi_infinite(f, lo, h, opts);
    } catch (const NumericalError& e) {
        throw NumericalError(ErrorKind::NonIntegrable, family_name() + " total weight: " + e.what());
    }
}

} // namespace cascade
