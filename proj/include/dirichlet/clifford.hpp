#pragma once

// Real Clifford algebra Cl(0,n), n <= 4, and Hamilton quaternions.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>

namespace dirichlet {

/// Element of Cl(0,n) with generators e_1..e_n, e_j e_k + e_k e_j = -2 delta_jk.
///
/// Coefficients are stored densely: slot A (a bitmask, bit j-1 set when e_j
/// participates) holds the coefficient of e_A = e_{i1} e_{i2} ... with
/// i1 < i2 < ... . Slot 0 is the scalar part.
class Multivector {
public:
    static constexpr int kMaxGenerators = 4;
    static constexpr std::size_t kMaxBlades = std::size_t{1} << kMaxGenerators;

    Multivector() = default;
    explicit Multivector(int generators);

    static Multivector scalar(int generators, double value);
    /// Basis blade e_A for the bitmask A.
    static Multivector blade(int generators, unsigned mask, double value = 1.0);
    /// Paravector x0 + x1 e1 + ... + xn en; `coords` holds (x0, x1, ..., xn).
    static Multivector paravector(int generators, std::span<const double> coords);

    int generators() const noexcept { return generators_; }
    std::size_t size() const noexcept { return std::size_t{1} << generators_; }

    double operator[](unsigned mask) const { return coeffs_[mask]; }
    double& operator[](unsigned mask) { return coeffs_[mask]; }

    double scalar_part() const noexcept { return coeffs_[0]; }
    /// Coefficient of e_k, k = 1..n.
    double vector_part(int k) const { return coeffs_.at(std::size_t{1} << (k - 1)); }
    /// Everything except the scalar slot.
    Multivector non_scalar() const;

    std::span<const double> coefficients() const noexcept { return {coeffs_.data(), size()}; }

    Multivector& operator+=(const Multivector& other);
    Multivector& operator-=(const Multivector& other);
    Multivector& operator*=(double s) noexcept;

    friend Multivector operator+(Multivector a, const Multivector& b) { return a += b; }
    friend Multivector operator-(Multivector a, const Multivector& b) { return a -= b; }
    friend Multivector operator*(Multivector a, double s) { return a *= s; }
    friend Multivector operator*(double s, Multivector a) { return a *= s; }
    friend Multivector operator*(const Multivector& a, const Multivector& b);
    Multivector operator-() const { return *this * -1.0; }

    bool operator==(const Multivector&) const = default;

private:
    int generators_ = 1;
    std::array<double, kMaxBlades> coeffs_{};
};

/// Geometric product; throws std::invalid_argument on mismatched algebras.
Multivector mv_mul(const Multivector& a, const Multivector& b);
/// Clifford conjugation: reversion composed with grade involution.
Multivector mv_conj(const Multivector& a);
/// sqrt(sum_A a_A^2).
double mv_norm(const Multivector& a);
double mv_norm_squared(const Multivector& a);

/// Sign of e_A e_B = sign * e_{A xor B} in Cl(0,n).
int blade_product_sign(unsigned a, unsigned b) noexcept;
int blade_grade(unsigned mask) noexcept;

/// Quaternion w + x i + y j + z k.
struct Quaternion {
    double w = 0.0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    static Quaternion from_point(std::span<const double> coords);

    Quaternion& operator+=(const Quaternion& q) noexcept;
    Quaternion& operator-=(const Quaternion& q) noexcept;
    Quaternion& operator*=(double s) noexcept;
    friend Quaternion operator+(Quaternion a, const Quaternion& b) noexcept { return a += b; }
    friend Quaternion operator-(Quaternion a, const Quaternion& b) noexcept { return a -= b; }
    friend Quaternion operator*(Quaternion a, double s) noexcept { return a *= s; }
    friend Quaternion operator*(double s, Quaternion a) noexcept { return a *= s; }
    friend Quaternion operator*(const Quaternion& p, const Quaternion& q) noexcept;

    bool operator==(const Quaternion&) const = default;
};

/// Hamilton product.
Quaternion quat_mul(const Quaternion& p, const Quaternion& q) noexcept;
Quaternion quat_conj(const Quaternion& q) noexcept;
double quat_norm(const Quaternion& q) noexcept;
/// Throws std::domain_error for q == 0.
Quaternion quat_inverse(const Quaternion& q);

/// i -> e1, j -> e2, k -> e1 e2.
Multivector to_multivector(const Quaternion& q);
/// Inverse of to_multivector; requires a Cl(0,2) element.
Quaternion to_quaternion(const Multivector& m);

}  // namespace dirichlet
