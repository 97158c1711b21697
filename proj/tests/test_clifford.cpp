#include <doctest.h>

#include <cmath>
#include <random>

#include "dirichlet/clifford.hpp"

using namespace dirichlet;

namespace {

Multivector random_mv(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Multivector m(n);
    for (unsigned a = 0; a < m.size(); ++a) m[a] = u(rng);
    return m;
}

double max_diff(const Multivector& a, const Multivector& b) {
    double d = 0.0;
    for (unsigned k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a[k] - b[k]));
    return d;
}

}  // namespace

TEST_CASE("generators square to -1 and anticommute") {
    for (int n = 1; n <= 4; ++n) {
        for (int j = 0; j < n; ++j) {
            const Multivector ej = Multivector::blade(n, 1u << j);
            CHECK(ej * ej == Multivector::scalar(n, -1.0));
            for (int k = j + 1; k < n; ++k) {
                const Multivector ek = Multivector::blade(n, 1u << k);
                CHECK(max_diff(ej * ek + ek * ej, Multivector(n)) == 0.0);
            }
        }
    }
}

TEST_CASE("identity and (1 + e1)(1 - e1)") {
    std::mt19937_64 rng(1);
    const Multivector x = random_mv(rng, 3);
    CHECK(Multivector::scalar(3, 1.0) * x == x);
    const Multivector one = Multivector::scalar(2, 1.0);
    const Multivector e1 = Multivector::blade(2, 1);
    CHECK((one + e1) * (one - e1) == Multivector::scalar(2, 2.0));
}

TEST_CASE("associativity and distributivity on random elements") {
    std::mt19937_64 rng(42);
    for (int n = 1; n <= 4; ++n) {
        for (int trial = 0; trial < 20; ++trial) {
            const Multivector a = random_mv(rng, n), b = random_mv(rng, n), c = random_mv(rng, n);
            CHECK(max_diff((a * b) * c, a * (b * c)) <= 1e-14);
            CHECK(max_diff(a * (b + c), a * b + a * c) <= 1e-14);
        }
    }
}

TEST_CASE("conjugation") {
    const Multivector e1 = Multivector::blade(2, 1);
    CHECK(mv_conj(e1) == -e1);
    CHECK(mv_conj(Multivector::scalar(2, 5.0)) == Multivector::scalar(2, 5.0));
    const Multivector e12 = Multivector::blade(2, 3);
    CHECK(mv_conj(e12) == -e12);
    CHECK((e12 * mv_conj(e12)).scalar_part() == doctest::Approx(1.0));

    std::mt19937_64 rng(7);
    for (int n = 1; n <= 4; ++n) {
        const Multivector a = random_mv(rng, n), b = random_mv(rng, n);
        CHECK(max_diff(mv_conj(a * b), mv_conj(b) * mv_conj(a)) <= 1e-14);
        CHECK(max_diff(mv_conj(mv_conj(a)), a) == 0.0);
        CHECK((a * mv_conj(a)).scalar_part() == doctest::Approx(mv_norm_squared(a)).epsilon(1e-14));
    }
}

TEST_CASE("norm") {
    const Multivector v = Multivector::blade(2, 1) + Multivector::blade(2, 2);
    CHECK(mv_norm(v) == doctest::Approx(std::sqrt(2.0)));
    CHECK(mv_norm(Multivector(3)) == 0.0);
    const Multivector x = Multivector::scalar(2, 1.0) + Multivector::blade(2, 3);
    CHECK(mv_norm(x) == doctest::Approx(std::sqrt(2.0)));
    CHECK(std::sqrt((x * mv_conj(x)).scalar_part()) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("paravector product with its conjugate is |x|^2") {
    const double c[] = {0.3, -1.2, 0.7, 2.0};
    const Multivector x = Multivector::paravector(3, c);
    const Multivector p = x * mv_conj(x);
    CHECK(p.scalar_part() == doctest::Approx(0.09 + 1.44 + 0.49 + 4.0));
    CHECK(mv_norm(p.non_scalar()) <= 1e-15);
}

TEST_CASE("mismatched algebras are rejected") {
    CHECK_THROWS_AS(mv_mul(Multivector(2), Multivector(3)), std::invalid_argument);
    CHECK_THROWS_AS(Multivector(5), std::invalid_argument);
}

TEST_CASE("quaternions") {
    const Quaternion i{0, 1, 0, 0}, j{0, 0, 1, 0}, k{0, 0, 0, 1};
    CHECK(quat_mul(i, j) == k);
    CHECK(quat_mul(j, i) == k * -1.0);
    CHECK(quat_mul(i, i) == Quaternion{-1, 0, 0, 0});

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 20; ++trial) {
        const Quaternion q{u(rng), u(rng), u(rng), u(rng)};
        const Quaternion one = quat_mul(q, quat_inverse(q));
        CHECK(one.w == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(std::abs(one.x) + std::abs(one.y) + std::abs(one.z) <= 1e-14);
        const Quaternion p{u(rng), u(rng), u(rng), u(rng)};
        CHECK(max_diff(to_multivector(quat_mul(p, q)), to_multivector(p) * to_multivector(q)) <= 1e-14);
        CHECK(quat_norm(quat_mul(p, q)) == doctest::Approx(quat_norm(p) * quat_norm(q)));
    }
    CHECK(to_multivector(quat_mul(i, j)) == Multivector::blade(2, 1) * Multivector::blade(2, 2));
    CHECK(to_quaternion(to_multivector(Quaternion{1, 2, 3, 4})) == Quaternion{1, 2, 3, 4});
    CHECK_THROWS_AS(quat_inverse(Quaternion{}), std::domain_error);
}

TEST_CASE("blade signs") {
    CHECK(blade_product_sign(1, 1) == -1);
    CHECK(blade_product_sign(1, 2) == 1);
    CHECK(blade_product_sign(2, 1) == -1);
    CHECK(blade_grade(0b1011) == 3);
}
