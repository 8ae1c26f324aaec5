#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "cascade/densities.hpp"

using namespace cascade;
using doctest::Approx;

TEST_CASE("evaluate") {
    SpectralDensity flat(FlatWindow{0.001, 0.5, 1.5});
    SpectralDensity ohm(OhmicExp{0.01, 10.0});
    SpectralDensity lor(ShiftedLorentzian{1.0, 1.0, 0.1});
    CHECK(flat(1.0) == 0.001);
    CHECK(flat(0.4) == 0.0);
    CHECK(flat(1.6) == 0.0);
    CHECK(ohm(0.0) == 0.0);
    CHECK(lor(-0.3) == 0.0);
    CHECK(ohm(2.0) == Approx(0.01 * 2.0 * std::exp(-0.2)));
    CHECK(lor(1.0) == Approx(1.0 / (std::numbers::pi * 0.1)));

    for (const SpectralDensity* d : {&flat, &ohm, &lor}) {
        for (double w : {-1e9, -5.0, -1e-12}) CHECK((*d)(w) == 0.0);
        for (double w = 0.0; w < 30.0; w += 0.37) CHECK((*d)(w) >= 0.0);
    }
}

TEST_CASE("tabulated interpolation") {
    SpectralDensity tri(Tabulated{{0.0, 1.0, 2.0}, {0.0, 0.5, 0.0}});
    CHECK(tri(0.0) == 0.0);
    CHECK(tri(1.0) == 0.5);
    CHECK(tri(2.0) == 0.0);
    CHECK(tri(0.5) == Approx(0.25));
    CHECK(tri(1.25) == Approx(0.375));
    CHECK(tri(2.5) == 0.0);
    CHECK(tri.total_weight().value == Approx(0.5).epsilon(1e-12));

    SpectralDensity neg(Tabulated{{-1.0, 1.0}, {1.0, 1.0}});
    CHECK(neg(-0.5) == 0.0);
    CHECK(neg(0.5) == 1.0);
    CHECK(neg.total_weight().value == Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(SpectralDensity(Tabulated{{0.0, 1.0, 1.0}, {0.0, 1.0, 0.0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(SpectralDensity(Tabulated{{0.0, 1.0}, {0.0, -1.0}}), std::invalid_argument);
}

TEST_CASE("csv loader") {
    const char* path = "density_table_test.csv";
    {
        std::ofstream out(path);
        out << "omega,value\n0,0\n1,0.5\n2,0\n";
    }
    SpectralDensity d = SpectralDensity::from_csv(path);
    CHECK(d(1.0) == 0.5);
    CHECK(d.total_weight().value == Approx(0.5).epsilon(1e-12));
    std::remove(path);
    CHECK_THROWS_AS(SpectralDensity::from_csv("no_such_file.csv"), std::invalid_argument);
}

TEST_CASE("total weight against closed forms") {
    CHECK(SpectralDensity(FlatWindow{0.001, 0.5, 1.5}).total_weight().value ==
          Approx(0.001).epsilon(1e-12));
    CHECK(SpectralDensity(OhmicExp{0.01, 10.0}).total_weight().value == Approx(1.0).epsilon(1e-9));
    const double A = 2.0, c = 1.0, G = 0.3;
    CHECK(SpectralDensity(ShiftedLorentzian{A, c, G}).total_weight().value ==
          Approx(A * (0.5 + std::atan(c / G) / std::numbers::pi)).epsilon(1e-8));
    CHECK(SpectralDensity().total_weight().value == 0.0);
}

TEST_CASE("scaling and validation") {
    SpectralDensity ohm(OhmicExp{0.01, 10.0});
    for (double c : {0.5, 3.0, 1e3}) {
        CHECK(ohm.scaled(c).total_weight().value ==
              Approx(c * ohm.total_weight().value).epsilon(1e-12));
    }
    CHECK_THROWS_AS(SpectralDensity(FlatWindow{0.001, 1.5, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(SpectralDensity(OhmicExp{0.01, -1.0}), std::invalid_argument);
    CHECK_THROWS_AS(SpectralDensity(ShiftedLorentzian{1.0, 1.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(SpectralDensity(FlatWindow{10.0, 0.0, 10.0}, 1.0), std::invalid_argument);
}

TEST_CASE("metadata") {
    SpectralDensity flat(FlatWindow{0.001, 0.5, 1.5});
    CHECK(flat.cutoff_scale() == 1.5);
    CHECK(flat.support_lo() == 0.5);
    CHECK(flat.support_hi() == 1.5);
    CHECK(flat.discontinuities().size() == 2);
    SpectralDensity ohm(OhmicExp{0.01, 10.0});
    CHECK(ohm.cutoff_scale() == 10.0);
    CHECK(ohm.sup() == Approx(0.01 * 10.0 / std::numbers::e));
    CHECK(std::isinf(ohm.support_hi()));
    CHECK(SpectralDensity().is_zero());
}
