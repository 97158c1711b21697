#include <doctest.h>

#include <atomic>
#include <cmath>
#include <numbers>
#include <random>

#include "dirichlet/quadrature.hpp"
#include "dirichlet/special_functions.hpp"

using namespace dirichlet;
using namespace dirichlet::quad;
constexpr double pi = std::numbers::pi;

TEST_CASE("gauss-legendre exactness") {
    for (int m : {1, 2, 5, 12, 40}) {
        const GaussRule& r = gauss_legendre(m);
        for (int p = 0; p <= 2 * m - 1; ++p) {
            double s = 0.0;
            for (int i = 0; i < m; ++i) s += r.w[i] * std::pow(r.x[i], p);
            const double exact = p % 2 ? 0.0 : 2.0 / (p + 1);
            CHECK(s == doctest::Approx(exact).epsilon(1e-13).scale(1.0));
        }
    }
    CHECK(&gauss_legendre(7) == &gauss_legendre(7));
}

TEST_CASE("sphere rules") {
    const QuadratureRule s2 = sphere_rule(3, 6);
    CHECK(integrate(s2, [](std::span<const double>) { return 1.0; }) == doctest::Approx(4 * pi).epsilon(1e-12));
    CHECK(integrate(s2, [](std::span<const double> x) { return x[0] * x[0]; }) ==
          doctest::Approx(4 * pi / 3).epsilon(1e-10));
    const QuadratureRule s1 = sphere_rule(2, 4);
    CHECK(std::abs(integrate(s1, [](std::span<const double> x) { return x[0]; })) <= 1e-14);
    CHECK(integrate(s1, [](std::span<const double>) { return 2.5; }) == doctest::Approx(2 * pi * 2.5));
    const QuadratureRule s3 = sphere_rule(4, 5);
    CHECK(integrate(s3, [](std::span<const double>) { return 1.0; }) == doctest::Approx(2 * pi * pi).epsilon(1e-12));
}

TEST_CASE("sphere rules integrate monomials up to degree 2 level - 1") {
    // int_{S^{n-1}} prod x_i^{a_i} = 2 prod Gamma(b_i) / Gamma(sum b_i), b_i = (a_i + 1) / 2 (all a_i even).
    auto exact = [](std::span<const int> a) {
        double num = 2.0;
        int twice_sum = 0;
        for (int ai : a) {
            if (ai % 2) return 0.0;
            num *= special::gamma_half_integer(ai + 1);
            twice_sum += ai + 1;
        }
        return num / special::gamma_half_integer(twice_sum);
    };
    for (int n = 2; n <= 4; ++n) {
        const int level = 4;
        const QuadratureRule rule = sphere_rule(n, level);
        std::vector<int> a(n, 0);
        std::mt19937_64 rng(n);
        for (int trial = 0; trial < 40; ++trial) {
            int deg = 0;
            for (int i = 0; i < n; ++i) {
                a[i] = static_cast<int>(rng() % 4);
                deg += a[i];
            }
            if (deg > 2 * level - 1) continue;
            const double v = integrate(rule, [&](std::span<const double> x) {
                double p = 1.0;
                for (int i = 0; i < n; ++i) p *= std::pow(x[i], a[i]);
                return p;
            });
            CHECK(v == doctest::Approx(exact(a)).epsilon(1e-12).scale(1.0));
        }
    }
}

TEST_CASE("box and line rules") {
    const QuadratureRule box = box_rule(1, 6.0, 6);
    CHECK(integrate(box, [](std::span<const double> x) { return std::exp(-pi * x[0] * x[0]); }) ==
          doctest::Approx(1.0).epsilon(1e-10));
    const QuadratureRule box2 = box_rule(2, 1.0, 1);
    CHECK(integrate(box2, [](std::span<const double> x) { return std::pow(x[0], 6) * x[1] * x[1]; }) ==
          doctest::Approx(4.0 / 21.0).epsilon(1e-13));
    const double c[] = {0.5, -0.25};
    const QuadratureRule line = line_rule(c, 1.0, 3);
    CHECK(integrate(line, [](std::span<const double> x) {
              return std::exp(-pi * ((x[0] - 0.5) * (x[0] - 0.5) + (x[1] + 0.25) * (x[1] + 0.25)));
          }) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("multivector integrands") {
    const QuadratureRule s1 = sphere_rule(2, 4);
    const Multivector v = integrate(s1, 2, [](std::span<const double> x) {
        return Multivector::blade(2, 1, x[0]) + Multivector::scalar(2, 1.0);
    });
    CHECK(v.scalar_part() == doctest::Approx(2 * pi));
    CHECK(std::abs(v.vector_part(1)) <= 1e-14);
}

TEST_CASE("non-finite integrands are reported") {
    const QuadratureRule s1 = sphere_rule(2, 2);
    CHECK_THROWS_AS(integrate(s1, [](std::span<const double>) { return std::nan(""); }), std::domain_error);
}

TEST_CASE("ray integrals") {
    auto h = [](double y) { return std::exp(-4 * pi * y); };
    CHECK(ray_integral(h, 0.0, 0.25, 3).value == doctest::Approx(1 / (4 * pi)).epsilon(1e-10));
    CHECK(ray_integral(h, 1.0, 0.25, 3).value == doctest::Approx(1 / (16 * pi * pi)).epsilon(1e-10));
    CHECK(ray_integral([](double) { return 0.0; }, 0.5, 1.0, 2).value == 0.0);
    const Estimate half = ray_integral(h, 0.5, 0.25, 3);
    CHECK(half.value == doctest::Approx(std::tgamma(1.5) / std::pow(4 * pi, 1.5)).epsilon(1e-10));
    CHECK(half.error < 1e-8);
}

TEST_CASE("singular schedules") {
    CHECK_NOTHROW(SingularSchedule::standard().validate());
    CHECK_THROWS_AS((SingularSchedule{{0.1, 0.2, 0.05}, 1}).validate(), std::invalid_argument);
    CHECK_THROWS_AS((SingularSchedule{{0.1, 0.05}, 1}).validate(), std::invalid_argument);
    CHECK_THROWS_AS((SingularSchedule{{0.1, 0.05, 0.02}, 3}).validate(), std::invalid_argument);
    const SingularSchedule s{{0.4, 0.2, 0.1, 0.05}, 3};
    std::vector<double> values;
    for (double r : s.radii) values.push_back(2.0 - r + 0.5 * r * r);
    const Estimate e = extrapolate_to_zero(s, values);
    CHECK(e.value == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(e.error <= 1e-13);
    const std::vector<double> wiggle{1.0, 1.3, 1.1, 1.4};
    CHECK_THROWS_WITH_AS(extrapolate_to_zero(s, wiggle), "schedule too coarse", std::runtime_error);
}

TEST_CASE("double sphere integrals") {
    auto cos_pair = [](std::span<const double> a, std::span<const double> b) {
        const double d = a[0] - b[0];
        return d * d / ((a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]));
    };
    const Estimate e = double_sphere_singular(2, cos_pair, 4, SingularSchedule::standard());
    CHECK(e.value / (2 * pi) == doctest::Approx(pi).epsilon(1e-6));
    const Estimate zero = double_sphere_singular(
        3, [](std::span<const double>, std::span<const double>) { return 0.0; }, 2, SingularSchedule::standard());
    CHECK(zero.value == 0.0);

    auto p2 = [](std::span<const double> a, std::span<const double> b) {
        const double d = 1.5 * (a[0] * a[0] - b[0] * b[0]);
        double c2 = 0.0;
        for (int k = 0; k < 3; ++k) c2 += (a[k] - b[k]) * (a[k] - b[k]);
        return d * d / std::pow(c2, 1.5);
    };
    const double omega2 = special::sphere_area(2);
    const Estimate full = double_sphere_singular(3, p2, 4, SingularSchedule::standard());
    const Estimate zonal = double_sphere_singular_zonal(3, p2, 4, SingularSchedule::standard());
    CHECK(full.value / omega2 == doctest::Approx(8 * pi / 5).epsilon(2e-2));
    CHECK(zonal.value / omega2 == doctest::Approx(8 * pi / 5).epsilon(1e-8));
}

TEST_CASE("double space integral of a Gaussian") {
    auto f = [](double x) { return std::exp(-pi * x * x); };
    const double center[] = {0.0};
    const Feature feature{{0.0}, 5.0};
    const Estimate e = double_space_singular(
        1,
        [&](std::span<const double> a, std::span<const double> b) {
            const double d = f(a[0]) - f(b[0]);
            return d * d / ((a[0] - b[0]) * (a[0] - b[0]));
        },
        center, 1.0, {&feature, 1}, 3, SingularSchedule::standard());
    CHECK(e.value / (2 * pi) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("parallel reductions are deterministic and cover every index") {
    std::vector<double> terms(10007);
    std::atomic<int> visits{0};
    auto fill = [&](int workers) {
        set_worker_count(workers);
        parallel_for(terms.size(), [&](std::size_t i) {
            terms[i] = std::sin(static_cast<double>(i)) / (1.0 + i);
            ++visits;
        });
        return pairwise_sum(terms);
    };
    const double one = fill(1);
    const double four = fill(4);
    CHECK(one == four);
    CHECK(visits == 2 * static_cast<int>(terms.size()));
    CHECK_THROWS_AS(parallel_for(8, [](std::size_t i) { if (i == 5) throw std::runtime_error("boom"); }),
                    std::runtime_error);
    set_worker_count(0);
    CHECK(worker_count() >= 1);
}
