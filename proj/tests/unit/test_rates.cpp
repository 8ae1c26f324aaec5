#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "cascade/rates.hpp"
#include "oracles.hpp"

using namespace cascade;
using doctest::Approx;

namespace {

CascadeSystem flat_system() {
    CascadeSystem s;
    s.omega01 = 1.0;
    s.omega12 = 10.0;
    s.density_y = SpectralDensity(FlatWindow{0.001, 0.5, 1.5});
    s.density_z = SpectralDensity(FlatWindow{0.1 / std::numbers::pi, 5.0, 15.0});
    return s;
}

} // namespace

TEST_CASE("bare constants") {
    CHECK(bare_constant(SpectralDensity(), 1.0).lambda == 0.0);
    CHECK(bare_constant(SpectralDensity(), 1.0).mu == 0.0);

    auto g = bare_constant(SpectralDensity(FlatWindow{0.001, 0.5, 1.5}), 1.0);
    CHECK(g.lambda == Approx(std::numbers::pi * 0.001));
    CHECK(std::abs(g.mu) < 1e-15);

    auto o = bare_constant(SpectralDensity(OhmicExp{0.01, 10.0}), 1.0);
    CHECK(o.lambda == Approx(2.843e-2).epsilon(1e-3));
    CHECK(o.mu == Approx(-oracle_ref::ohmic_pv(0.01, 10.0, 1.0)).epsilon(1e-9));

    // Negative transition energy: no decay, shift is an ordinary integral.
    auto n = bare_constant(SpectralDensity(OhmicExp{0.01, 10.0}), -0.5);
    CHECK(n.lambda == 0.0);
    CHECK(n.mu < 0.0);
    CHECK(n.mu == Approx(-oracle_ref::midpoint(
                              [](double w) { return 0.01 * w * std::exp(-w / 10.0) / (w + 0.5); },
                              0.0, 600.0, 2'000'000))
                      .epsilon(1e-7));
}

TEST_CASE("perturbed constants") {
    SpectralDensity flat(FlatWindow{0.001, 0.5, 1.5});
    auto g = perturbed_constant(flat, 1.0, ComplexDecayConstant{0.1, 0.0});
    CHECK(g.lambda == Approx(0.001 * 2.0 * std::atan(5.0)).epsilon(1e-10));
    CHECK(std::abs(g.mu) < 1e-14);

    SpectralDensity ohm(OhmicExp{0.01, 10.0});
    SUBCASE("narrow intermediate level recovers the Golden rule") {
        auto t = perturbed_constant(ohm, 1.0, ComplexDecayConstant{1e-6, 0.0});
        const double gr = golden_rule(ohm, 1.0, 0.0);
        CHECK(std::abs(t.rate() - gr) / gr < 1e-3);
    }
    SUBCASE("uphill first transition still decays") {
        // omega01 - mu1 = -0.5, lambda1 = 0.5
        auto t = perturbed_constant(ohm, -0.3, ComplexDecayConstant{0.5, 0.2});
        CHECK(golden_rule(ohm, -0.3, 0.2) == 0.0);
        CHECK(t.lambda > 0.0);
        const double ref = oracle_ref::midpoint(
            [](double w) { return 0.01 * w * std::exp(-w / 10.0) * 0.5 / (0.25 + (w + 0.5) * (w + 0.5)); },
            0.0, 600.0, 2'000'000);
        CHECK(t.lambda == Approx(ref).epsilon(1e-7));
    }
    SUBCASE("convolution route equals the direct rate integral") {
        for (double l1 : {0.003, 0.1, 2.0, 50.0}) {
            CAPTURE(l1);
            QuadratureOptions tight;
            tight.rtol = 1e-11;
            tight.atol = 1e-15;
            const ComplexDecayConstant g1{l1, 0.07};
            const double a = perturbed_constant(ohm, 1.0, g1, tight).rate();
            const double b = perturbed_rate_direct(ohm, 1.0, g1, tight).value;
            CHECK(std::abs(a - b) <= 1e-8 * std::abs(b));
        }
    }
    SUBCASE("bounds") {
        for (double l1 : {1e-4, 1e-2, 1.0, 1e2}) {
            auto t = perturbed_constant(ohm, 1.0, ComplexDecayConstant{l1, 0.0});
            CHECK(t.lambda >= 0.0);
            CHECK(t.lambda <= std::numbers::pi * ohm.sup());
        }
    }
}

TEST_CASE("system constants and corrected energies") {
    CascadeSystem s = flat_system();
    auto k = perturbed_constant(s);
    CHECK(k.gamma1.lambda == Approx(0.1));
    CHECK(std::abs(k.gamma1.mu) < 1e-14);
    CHECK(std::abs(k.gamma_tilde0.mu) < 1e-14);
    auto e = corrected_energies(s, k);
    CHECK(e.bar01 == Approx(1.0));
    CHECK(e.bar12 == Approx(10.0));
    CHECK(e.bar02 - e.bar01 - e.bar12 == 0.0);
    CHECK(golden_rule(s, k.gamma1) == Approx(2.0 * std::numbers::pi * 0.001));

    CascadeSystem o;
    o.omega01 = 1.0;
    o.omega12 = 5.0;
    o.density_y = SpectralDensity(OhmicExp{0.01, 10.0});
    o.density_z = SpectralDensity(OhmicExp{0.02, 10.0});
    auto ko = perturbed_constant(o, QuadratureOptions{});
    auto eo = corrected_energies(o, ko);
    CHECK(eo.bar01 == Approx(1.0 + ko.gamma_tilde0.mu - ko.gamma1.mu));
    CHECK(eo.bar12 == Approx(5.0 + ko.gamma1.mu));
    CHECK(eo.bar02 - eo.bar01 - eo.bar12 == 0.0);
    CHECK(golden_rule(SpectralDensity(OhmicExp{0.01, 10.0}), 1.0, 0.0) ==
          Approx(2.0 * std::numbers::pi * 0.01 * std::exp(-0.1)));
    CHECK(golden_rule(o.density_y, -0.2, 0.0) == 0.0);

    CascadeSystem bad = flat_system();
    bad.density_z = SpectralDensity(FlatWindow{0.1, 20.0, 30.0});
    CHECK_THROWS_AS(perturbed_constant(bad), std::invalid_argument);
    bad.omega12 = -1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("Zeno sweep") {
    CascadeSystem s = flat_system();
    SUBCASE("wide intermediate level suppresses decay as 1/lambda1") {
        std::vector<double> l1{100.0};
        auto pts = zeno_curve(s, l1);
        CHECK(pts[0].rate_tilde == Approx(2.0 * 0.001 / 100.0).epsilon(1e-4));
    }
    SUBCASE("monotone beyond the density width, serial equals parallel") {
        std::vector<double> l1;
        for (int i = 0; i <= 40; ++i) l1.push_back(std::pow(10.0, -2.0 + 0.1 * i));
        auto par = zeno_curve(s, l1, {}, Execution::parallel);
        auto ser = zeno_curve(s, l1, {}, Execution::serial);
        REQUIRE(par.size() == l1.size());
        for (std::size_t i = 0; i < l1.size(); ++i) {
            CHECK(par[i].lambda1 == l1[i]);
            CHECK(par[i].rate_tilde == ser[i].rate_tilde);
            CHECK(par[i].mu_tilde == ser[i].mu_tilde);
            if (i > 0 && l1[i - 1] >= 1.0) CHECK(par[i].rate_tilde < par[i - 1].rate_tilde);
        }
    }
}
