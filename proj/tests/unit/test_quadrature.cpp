#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cascade/convolution.hpp"
#include "cascade/densities.hpp"
#include "cascade/errors.hpp"
#include "cascade/quadrature.hpp"
#include "oracles.hpp"

using namespace cascade;
using doctest::Approx;

TEST_CASE("gauss_kronrod21 is exact for polynomials up to degree 31") {
    auto r = gauss_kronrod21([](double x) { return std::pow(x, 30) + x * x; }, 0.0, 1.0);
    CHECK(r.value == Approx(1.0 / 31.0 + 1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("semi-infinite integrals") {
    IntegrandHints h;
    auto r = integrate_semi_infinite([](double w) { return std::exp(-w); }, 0.0, h);
    CHECK(r.value == Approx(1.0).epsilon(1e-10));
    CHECK(r.error_estimate >= 0.0);
    CHECK(r.error_estimate <= 1e-8 * std::abs(r.value) + 1e-12);

    SpectralDensity flat(FlatWindow{0.001, 0.5, 1.5});
    auto f = integrate_semi_infinite([&](double w) { return flat(w); }, 0.0, flat.hints());
    CHECK(f.value == Approx(0.001).epsilon(1e-10));
}

TEST_CASE("ohmic density times a Lorentzian agrees with a 1e7-point midpoint sum") {
    SpectralDensity v(OhmicExp{0.01, 10.0});
    auto f = [&](double w) {
        const double d = w - 1.0;
        return v(w) * (1.0 / std::numbers::pi) * 0.1 / (0.01 + d * d);
    };
    IntegrandHints h = v.hints();
    h.breakpoints.push_back(1.0);
    const double got = integrate_semi_infinite(f, 0.0, h).value;
    // V(w) < e^{-100} beyond w = 1000
    const double ref = oracle_ref::midpoint(f, 0.0, 1000.0, 10'000'000);
    CHECK(got == Approx(ref).epsilon(1e-6));
}

TEST_CASE("principal values") {
    SUBCASE("flat window symmetric about the pole") {
        SpectralDensity v(FlatWindow{0.001, 0.8, 1.2});
        auto r = principal_value([&](double w) { return v(w); }, 1.0, v.hints());
        CHECK(std::abs(r.value) < 1e-14);
    }
    SUBCASE("w on [0, 2], pole 1 gives 2") {
        SpectralDensity v(Tabulated{{0.0, 2.0}, {0.0, 2.0}});
        auto r = principal_value([&](double w) { return v(w); }, 1.0, v.hints());
        CHECK(r.value == Approx(2.0).epsilon(1e-10));
    }
    SUBCASE("ohmic against the exponential-integral closed form and a symmetric grid") {
        const double g2 = 0.01;
        const double L = 10.0;
        SpectralDensity v(OhmicExp{g2, L});
        const double got = principal_value([&](double w) { return v(w); }, 1.0, v.hints()).value;
        CHECK(got == Approx(oracle_ref::ohmic_pv(g2, L, 1.0)).epsilon(1e-9));

        // Cell-centred grid symmetric about the pole, Richardson in the cell size.
        auto brute = [&](long n) {
            auto f = [&](double w) { return v(w) / (w - 1.0); };
            return oracle_ref::midpoint(f, 0.0, 2.0, n) + oracle_ref::midpoint(f, 2.0, 802.0, 40 * n);
        };
        const double b1 = brute(200'000);
        const double b2 = brute(400'000);
        const double rich = b2 + (b2 - b1) / 3.0;
        CHECK(got == Approx(rich).epsilon(1e-7));
    }
    SUBCASE("pole below the support is an ordinary integral") {
        SpectralDensity v(FlatWindow{1.0, 1.0, 2.0});
        auto r = principal_value([&](double w) { return v(w); }, -1.0, v.hints());
        CHECK(r.value == Approx(std::log(3.0 / 2.0)).epsilon(1e-10));
    }
    SUBCASE("pole on a jump is refused") {
        SpectralDensity v(FlatWindow{0.001, 0.5, 1.5});
        try {
            principal_value([&](double w) { return v(w); }, 1.5, v.hints());
            FAIL("expected PoleOnSupportBoundary");
        } catch (const NumericalError& e) {
            CHECK(e.kind() == ErrorKind::PoleOnSupportBoundary);
        }
    }
    SUBCASE("linearity") {
        SpectralDensity a(OhmicExp{0.02, 5.0});
        SpectralDensity b(Tabulated{{0.0, 1.0, 3.0}, {0.0, 0.4, 0.0}});
        IntegrandHints h = a.hints();
        for (double x : b.breakpoints()) h.breakpoints.push_back(x);
        const double pa = principal_value([&](double w) { return a(w); }, 1.7, a.hints()).value;
        const double pb = principal_value([&](double w) { return b(w); }, 1.7, b.hints()).value;
        const double pab =
            principal_value([&](double w) { return 2.0 * a(w) - 3.0 * b(w); }, 1.7, h).value;
        CHECK(pab == Approx(2.0 * pa - 3.0 * pb).epsilon(1e-8));
    }
}

TEST_CASE("non-integrable input reports NoConvergence") {
    try {
        integrate([](double x) { return 1.0 / x; }, 0.0, 1.0);
        FAIL("expected a NumericalError");
    } catch (const NumericalError& e) {
        CHECK((e.kind() == ErrorKind::NoConvergence || e.kind() == ErrorKind::NonIntegrable));
    }
}

TEST_CASE("Lorentzian convolutions") {
    SpectralDensity flat(FlatWindow{0.001, 0.5, 1.5});

    SUBCASE("absorptive flat window: closed arctan form and a brute-force grid") {
        const double got =
            lorentzian_convolution(flat, 1.0, 0.1, ConvolutionKind::absorptive).value;
        CHECK(got == Approx(0.001 * 2.0 * std::atan(5.0)).epsilon(1e-10));
        CHECK(got == Approx(2.747e-3).epsilon(1e-3));
        const double brute = oracle_ref::midpoint(
            [](double w) { return 0.001 * 0.1 / (0.01 + (w - 1.0) * (w - 1.0)); }, 0.5, 1.5,
            1'000'000);
        CHECK(got == Approx(brute).epsilon(1e-9));
    }
    SUBCASE("dispersive symmetric window vanishes") {
        const double got =
            lorentzian_convolution(flat, 1.0, 0.1, ConvolutionKind::dispersive).value;
        CHECK(std::abs(got) < 1e-14);
    }
    SUBCASE("narrow kernel tends to pi V(center)") {
        SpectralDensity v(OhmicExp{0.01, 10.0});
        const double got =
            lorentzian_convolution(v, 1.0, 1e-6, ConvolutionKind::absorptive).value;
        CHECK(got == Approx(std::numbers::pi * v(1.0)).epsilon(1e-4));
    }
    SUBCASE("shifted Lorentzian density against complex partial fractions") {
        const double A = 0.7, wc = 1.3, G = 0.2;
        SpectralDensity v(ShiftedLorentzian{A, wc, G});
        for (double c : {0.4, 1.0, 2.5}) {
            for (double hw : {0.05, 0.5, 3.0}) {
                CAPTURE(c);
                CAPTURE(hw);
                const double abs_ =
                    lorentzian_convolution(v, c, hw, ConvolutionKind::absorptive).value;
                const double dis =
                    lorentzian_convolution(v, c, hw, ConvolutionKind::dispersive).value;
                CHECK(abs_ == Approx(oracle_ref::lorentzian_absorptive(A, wc, G, c, hw)).epsilon(1e-8));
                CHECK(dis == Approx(oracle_ref::lorentzian_dispersive(A, wc, G, c, hw)).epsilon(1e-7));
            }
        }
    }
    SUBCASE("bounded by pi sup V and monotone in the density") {
        SpectralDensity small(OhmicExp{0.01, 3.0});
        SpectralDensity big(OhmicExp{0.02, 3.0});
        for (double hw : {0.01, 0.3, 10.0}) {
            const double s = lorentzian_convolution(small, 2.0, hw, ConvolutionKind::absorptive).value;
            const double b = lorentzian_convolution(big, 2.0, hw, ConvolutionKind::absorptive).value;
            CHECK(s <= std::numbers::pi * small.sup() * (1 + 1e-10));
            CHECK(s <= b + 1e-12);
        }
    }
    SUBCASE("wide flat window: result close to pi v0 for any narrow half-width") {
        SpectralDensity wide(FlatWindow{0.002, 0.0, 200.0});
        for (double hw : {0.01, 0.1, 1.0}) {
            const double r = lorentzian_convolution(wide, 100.0, hw, ConvolutionKind::absorptive).value;
            CHECK(r == Approx(std::numbers::pi * 0.002).epsilon(0.01 * hw + 1e-9));
        }
    }
    SUBCASE("half-width must be positive") {
        CHECK_THROWS_AS(lorentzian_convolution(flat, 1.0, 0.0, ConvolutionKind::absorptive),
                        std::invalid_argument);
    }
}
