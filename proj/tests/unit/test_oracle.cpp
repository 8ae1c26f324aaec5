#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "cascade/errors.hpp"
#include "cascade/oracle.hpp"
#include "cascade/spectra.hpp"

using namespace cascade;
using doctest::Approx;

namespace {

ErrorKind kind_of(auto&& f) {
    try {
        f();
    } catch (const NumericalError& e) {
        return e.kind();
    }
    FAIL("expected a NumericalError");
    return ErrorKind::NoConvergence;
}

// Small, fast cascade: lambda~0 ~ 0.04, lambda1 = 0.1.
CascadeSystem small_cascade() {
    CascadeSystem s;
    s.omega01 = 1.0;
    s.omega12 = 3.0;
    s.density_y = SpectralDensity(FlatWindow{0.016, 0.75, 1.25});
    s.density_z = SpectralDensity(FlatWindow{0.1 / std::numbers::pi, 2.5, 3.5});
    return s;
}

DiscreteModel small_model(std::size_t n = 50) {
    return discretize(small_cascade(), n, n, {0.75, 1.25}, {2.5, 3.5});
}

// One y mode, optionally one z mode; spacings tiny so the recurrence horizon is far.
DiscreteModel single_mode(double g, double detuning) {
    DiscreteModel m;
    m.omega01 = 1.0;
    m.omega12 = 3.0;
    m.y_modes = {Mode{1.0 + detuning, g}};
    m.z_modes = {Mode{3.0, 0.0}};
    m.dy = 1e-6;
    m.dz = 1e-6;
    return m;
}

} // namespace

TEST_CASE("discretize") {
    CascadeSystem s = small_cascade();

    SUBCASE("zero density gives zero couplings") {
        s.density_y = SpectralDensity();
        const DiscreteModel m = discretize(s, 60, 50, {0.75, 1.25}, {2.5, 3.5});
        for (const Mode& y : m.y_modes) CHECK(y.coupling == 0.0);
        CHECK(m.dimension() == 1 + 60 + 60 * 50);
    }

    SUBCASE("flat window gives uniform couplings") {
        const DiscreteModel m = small_model();
        const double g = std::sqrt(0.016 * 0.5 / 50.0);
        for (const Mode& y : m.y_modes) CHECK(y.coupling == Approx(g).epsilon(1e-14));
        CHECK(m.y_modes.front().omega == Approx(0.75 + 0.005));
        CHECK(m.dy == Approx(0.01));
        CHECK(m.dz == Approx(0.02));
        CHECK(m.max_detuning() == Approx(0.5 - 0.01));
        CHECK(m.recurrence_time() == Approx(2.0 * std::numbers::pi / 0.02));
    }

    SUBCASE("squared couplings converge to the total weight at second order") {
        s.omega01 = 1.0;
        s.omega12 = 10.0;
        s.density_y = SpectralDensity(OhmicExp{3.0, 1.0});
        s.density_z = SpectralDensity(FlatWindow{0.3, 5.0, 15.0});
        const double total = s.density_y.total_weight().value;
        std::vector<double> err;
        for (std::size_t n : {100, 200, 400}) {
            const DiscreteModel m = discretize(s, n, 50, {0.0, 40.0}, {5.0, 15.0});
            double sum = 0.0;
            for (const Mode& y : m.y_modes) sum += y.coupling * y.coupling;
            err.push_back(std::abs(sum - total));
        }
        CHECK(err[0] / err[1] == Approx(4.0).epsilon(0.05));
        CHECK(err[1] / err[2] == Approx(4.0).epsilon(0.05));
    }

    SUBCASE("range must hold the density mass") {
        CHECK(kind_of([&] { discretize(s, 50, 50, {0.8, 1.25}, {2.5, 3.5}); }) ==
              ErrorKind::RangeTooNarrow);
        CHECK(kind_of([&] { discretize(s, 50, 50, {0.75, 1.25}, {2.5, 3.4}); }) ==
              ErrorKind::RangeTooNarrow);
        CHECK_THROWS_AS(discretize(s, 50, 50, {1.25, 0.75}, {2.5, 3.5}), std::invalid_argument);
    }

    SUBCASE("recurrence guard") {
        CHECK(kind_of([&] { discretize(s, 10, 50, {0.75, 1.25}, {2.5, 3.5}); }) ==
              ErrorKind::RecurrenceGuard);
        CHECK(kind_of([&] { discretize(s, 50, 10, {0.75, 1.25}, {2.5, 3.5}); }) ==
              ErrorKind::RecurrenceGuard);
        const DiscreteModel m = small_model();
        CHECK(kind_of([&] { evolve(m, 0.5 * m.recurrence_time(), 0.05); }) ==
              ErrorKind::RecurrenceGuard);
    }
}

TEST_CASE("two-state Rabi oscillation") {
    const double g = 0.1;

    SUBCASE("on resonance") {
        EvolveOptions o;
        o.sample_every = 1;
        const OracleRun run = evolve(single_mode(g, 0.0), 100.0, 0.01, o);
        double dev = 0.0;
        for (const OracleSample& s : run.history) {
            const double c = std::cos(g * s.t);
            dev = std::max(dev, std::abs(s.p0 - c * c));
        }
        CHECK(dev < 1e-9);
        CHECK(run.max_norm_error < 1e-10);
    }

    SUBCASE("detuned") {
        const double d = 0.3;
        const double W = std::sqrt(g * g + d * d / 4.0);
        EvolveOptions o;
        o.sample_every = 1;
        const OracleRun run = evolve(single_mode(g, d), 100.0, 0.01, o);
        double dev = 0.0;
        for (const OracleSample& s : run.history) {
            const double sn = std::sin(W * s.t);
            dev = std::max(dev, std::abs(s.p0 - (1.0 - g * g / (W * W) * sn * sn)));
        }
        CHECK(dev < 1e-9);
    }

    SUBCASE("time step limit") {
        CHECK_THROWS_AS(evolve(single_mode(g, 0.3), 10.0, 0.5), std::invalid_argument);
    }
}

TEST_CASE("small cascade") {
    const CascadeSystem s = small_cascade();
    const DiscreteModel m = small_model();
    const double T = 150.0;
    const double dt = 0.05;
    const OracleRun run = evolve(m, T, dt);

    SUBCASE("unitarity") {
        CHECK(run.max_norm_error < 1e-10);
        for (const OracleSample& x : run.history) CHECK(std::abs(x.norm - 1.0) < 1e-10);
        const DiscreteSpectrum sp = extract_spectra(run, m);
        CHECK(std::abs(sp.emitted + sp.p0 + sp.p1 - 1.0) < 1e-8);
        CHECK(sp.p1 < intermediate_limit);
    }

    SUBCASE("intermediate level empties") {
        // sum |a1|^2 falls once t >> 1/lambda1.
        double late = 0.0;
        double peak = 0.0;
        for (const OracleSample& x : run.history) {
            peak = std::max(peak, x.p1);
            if (x.t > 0.9 * T) late = std::max(late, x.p1);
        }
        CHECK(late < 0.05 * peak);
    }

    SUBCASE("a0 decays near the perturbative rate") {
        const SpectralConstants c = spectral_constants(s, perturbed_constant(s));
        const OracleSample& mid = *std::find_if(run.history.begin(), run.history.end(),
                                                [&](const OracleSample& x) { return x.t >= 1.0 / c.lambda_tilde0; });
        CHECK(mid.p0 == Approx(std::exp(-2.0 * c.lambda_tilde0 * mid.t)).epsilon(0.2));
    }

    SUBCASE("not converged") {
        const OracleRun early = evolve(m, 10.0, dt);
        CHECK(kind_of([&] { extract_spectra(early, m); }) == ErrorKind::NotConverged);
    }

    SUBCASE("serial and parallel are identical") {
        EvolveOptions o;
        o.exec = Execution::serial;
        const OracleRun serial = evolve(m, 40.0, dt, o);
        const OracleRun parallel = evolve(m, 40.0, dt);
        CHECK(serial.state == parallel.state);
    }

    SUBCASE("fourth order in the time step") {
        const double d1 = step_doubling_deviation(m, 40.0, 0.05);
        const double d2 = step_doubling_deviation(m, 40.0, 0.025);
        CHECK(d1 / d2 == Approx(16.0).epsilon(0.15));
    }

    SUBCASE("relative L1") {
        const std::vector<double> a{1.0, 2.0};
        CHECK(relative_l1(a, std::vector<double>{1.0, 1.0}) == Approx(0.5));
        CHECK_THROWS_AS(relative_l1(a, std::vector<double>{1.0}), NumericalError);
    }
}

TEST_CASE("uphill first step still decays") {
    // bar01 < 0: x0 leaks only through the width of x1; p_y has no interior peak.
    CascadeSystem s;
    s.omega01 = -0.05;
    s.omega12 = 3.0;
    s.density_y = SpectralDensity(FlatWindow{0.02, 0.0, 1.0});
    s.density_z = SpectralDensity(FlatWindow{0.3 / std::numbers::pi, 1.5, 4.5});
    const SpectralConstants c = spectral_constants(s, perturbed_constant(s));
    REQUIRE(c.bar.bar01 < 0.0);

    const DiscreteModel m = discretize(s, 150, 120, {0.0, 1.0}, {1.5, 4.5});
    const double T = 0.45 * m.recurrence_time();
    const OracleRun run = evolve(m, T, 0.1 / m.max_detuning());
    CHECK(run.max_norm_error < 1e-8);
    CHECK(run.history.back().p0 < 0.5);

    const DiscreteSpectrum sp = extract_spectra(run, m);
    const auto top = std::max_element(sp.marginal_y.begin(), sp.marginal_y.end());
    CHECK(top - sp.marginal_y.begin() <= 2);
}
