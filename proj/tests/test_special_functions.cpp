#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "dirichlet/special_functions.hpp"

using namespace dirichlet::special;
constexpr double pi = std::numbers::pi;

TEST_CASE("gegenbauer values") {
    for (int n = 2; n <= 4; ++n) {
        for (double t : {-1.0, -0.3, 0.0, 0.8}) CHECK(gegenbauer(n, 0, t) == 1.0);
        for (int k = 0; k <= 10; ++k) CHECK(gegenbauer(n, k, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    }
    CHECK(gegenbauer(2, 2, 0.5) == doctest::Approx(-0.5).epsilon(1e-15));
    for (double t : {-0.9, -0.2, 0.4, 1.0}) {
        CHECK(gegenbauer(3, 2, t) == doctest::Approx((3 * t * t - 1) / 2).epsilon(1e-14));
        CHECK(gegenbauer(4, 2, t) == doctest::Approx((4 * t * t - 1) / 3).epsilon(1e-14));
        CHECK(gegenbauer(2, 7, t) == doctest::Approx(std::cos(7 * std::acos(t))).epsilon(1e-12));
        CHECK(gegenbauer(3, 5, t) == doctest::Approx(std::legendre(5, t)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(gegenbauer(3, 2, 1.5), std::domain_error);
}

TEST_CASE("gegenbauer derivative matches finite differences") {
    const double h = 1e-6;
    for (int n = 2; n <= 4; ++n) {
        for (int k = 1; k <= 8; ++k) {
            for (double t : {-0.7, 0.1, 0.55}) {
                const double fd = (gegenbauer(n, k, t + h) - gegenbauer(n, k, t - h)) / (2 * h);
                CHECK(gegenbauer_derivative(n, k, t) == doctest::Approx(fd).epsilon(1e-7));
            }
        }
    }
}

TEST_CASE("table agrees with pointwise evaluation") {
    GegenbauerTable table(4, 12);
    double values[13], derivs[13];
    table.evaluate(0.37, values, derivs);
    for (int k = 0; k <= 12; ++k) {
        CHECK(values[k] == doctest::Approx(gegenbauer(4, k, 0.37)).epsilon(1e-14));
        CHECK(derivs[k] == doctest::Approx(gegenbauer_derivative(4, k, 0.37)).epsilon(1e-12));
    }
    const double coeffs[] = {1.0, 0.0, -2.0};
    CHECK(table.series(coeffs, 0.5) == doctest::Approx(1.0 - 2.0 * gegenbauer(4, 2, 0.5)));
}

TEST_CASE("projection constants") {
    for (int k = 1; k <= 10; ++k) CHECK(coeff_c(2, k) == doctest::Approx(1.0 / pi).epsilon(1e-14));
    CHECK(coeff_c(3, 2) == doctest::Approx(5.0 / (4.0 * pi)).epsilon(1e-14));
    CHECK(coeff_c(4, 2) == doctest::Approx(9.0 / (2.0 * pi * pi)).epsilon(1e-14));
    for (int k = 0; k <= 6; ++k) CHECK(coeff_c(3, k) == doctest::Approx((2 * k + 1) / (4 * pi)).epsilon(1e-14));
    CHECK(coeff_c(2, 0) == doctest::Approx(1.0 / (2.0 * pi)));
}

TEST_CASE("sphere areas and half-integer gamma") {
    CHECK(sphere_area(1) == doctest::Approx(2 * pi).epsilon(1e-15));
    CHECK(sphere_area(2) == doctest::Approx(4 * pi).epsilon(1e-15));
    CHECK(sphere_area(3) == doctest::Approx(2 * pi * pi).epsilon(1e-15));
    CHECK(sphere_area(4) == doctest::Approx(8 * pi * pi / 3).epsilon(1e-15));
    for (int m = 1; m <= 12; ++m) CHECK(gamma_half_integer(m) == doctest::Approx(std::tgamma(0.5 * m)).epsilon(1e-14));
}

TEST_CASE("scaled modified Bessel functions") {
    for (double z : {0.0, 0.3, 5.0, 80.0, 500.0}) {
        CHECK(bessel_i_scaled(0, z) == doctest::Approx(std::cyl_bessel_i(0.0, z) * std::exp(-z)).epsilon(1e-13));
        CHECK(bessel_i_scaled(1, z) == doctest::Approx(std::cyl_bessel_i(1.0, z) * std::exp(-z)).epsilon(1e-13));
    }
    // Large argument: e^{-z} I_0(z) ~ 1 / sqrt(2 pi z).
    CHECK(bessel_i_scaled(0, 1e6) == doctest::Approx(1.0 / std::sqrt(2 * pi * 1e6)).epsilon(1e-6));
}
