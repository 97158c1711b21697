#include "dirichlet/clifford.hpp"

#include <bit>
#include <cmath>

namespace dirichlet {

namespace {

void check_generators(int n) {
    if (n < 1 || n > Multivector::kMaxGenerators) {
        throw std::invalid_argument("Clifford algebra needs 1 to 4 generators, got " +
                                    std::to_string(n));
    }
}

void check_same_algebra(const Multivector& a, const Multivector& b) {
    if (a.generators() != b.generators()) {
        throw std::invalid_argument("algebra dimension mismatch");
    }
}

}  // namespace

int blade_grade(unsigned mask) noexcept { return std::popcount(mask); }

int blade_product_sign(unsigned a, unsigned b) noexcept {
    // Count transpositions needed to move every generator of b past the
    // larger generators of a, then one factor of -1 per repeated generator.
    int swaps = 0;
    for (unsigned rest = a >> 1; rest != 0; rest >>= 1) {
        swaps += std::popcount(rest & b);
    }
    swaps += std::popcount(a & b);
    return (swaps & 1) ? -1 : 1;
}

Multivector::Multivector(int generators) : generators_(generators) {
    check_generators(generators);
}

Multivector Multivector::scalar(int generators, double value) {
    Multivector m(generators);
    m.coeffs_[0] = value;
    return m;
}

Multivector Multivector::blade(int generators, unsigned mask, double value) {
    Multivector m(generators);
    if (mask >= m.size()) {
        throw std::invalid_argument("blade index outside the algebra");
    }
    m.coeffs_[mask] = value;
    return m;
}

Multivector Multivector::paravector(int generators, std::span<const double> coords) {
    Multivector m(generators);
    if (coords.size() != static_cast<std::size_t>(generators) + 1) {
        throw std::invalid_argument("paravector needs n+1 coordinates");
    }
    m.coeffs_[0] = coords[0];
    for (int k = 1; k <= generators; ++k) {
        m.coeffs_[std::size_t{1} << (k - 1)] = coords[k];
    }
    return m;
}

Multivector Multivector::non_scalar() const {
    Multivector m = *this;
    m.coeffs_[0] = 0.0;
    return m;
}

Multivector& Multivector::operator+=(const Multivector& other) {
    check_same_algebra(*this, other);
    for (std::size_t i = 0; i < size(); ++i) coeffs_[i] += other.coeffs_[i];
    return *this;
}

Multivector& Multivector::operator-=(const Multivector& other) {
    check_same_algebra(*this, other);
    for (std::size_t i = 0; i < size(); ++i) coeffs_[i] -= other.coeffs_[i];
    return *this;
}

Multivector& Multivector::operator*=(double s) noexcept {
    for (std::size_t i = 0; i < size(); ++i) coeffs_[i] *= s;
    return *this;
}

Multivector operator*(const Multivector& a, const Multivector& b) { return mv_mul(a, b); }

Multivector mv_mul(const Multivector& a, const Multivector& b) {
    check_same_algebra(a, b);
    Multivector out(a.generators());
    const auto blades = static_cast<unsigned>(a.size());
    for (unsigned i = 0; i < blades; ++i) {
        const double ai = a[i];
        if (ai == 0.0) continue;
        for (unsigned j = 0; j < blades; ++j) {
            const double bj = b[j];
            if (bj == 0.0) continue;
            out[i ^ j] += blade_product_sign(i, j) * ai * bj;
        }
    }
    return out;
}

Multivector mv_conj(const Multivector& a) {
    Multivector out = a;
    const auto blades = static_cast<unsigned>(a.size());
    for (unsigned mask = 1; mask < blades; ++mask) {
        const int k = blade_grade(mask);
        if (((k * (k + 1)) / 2) % 2 == 1) out[mask] = -out[mask];
    }
    return out;
}

double mv_norm_squared(const Multivector& a) {
    double s = 0.0;
    for (double c : a.coefficients()) s += c * c;
    return s;
}

double mv_norm(const Multivector& a) { return std::sqrt(mv_norm_squared(a)); }

Quaternion Quaternion::from_point(std::span<const double> coords) {
    if (coords.size() != 4) throw std::invalid_argument("quaternion point needs 4 coordinates");
    return {coords[0], coords[1], coords[2], coords[3]};
}

Quaternion& Quaternion::operator+=(const Quaternion& q) noexcept {
    w += q.w;
    x += q.x;
    y += q.y;
    z += q.z;
    return *this;
}

Quaternion& Quaternion::operator-=(const Quaternion& q) noexcept {
    w -= q.w;
    x -= q.x;
    y -= q.y;
    z -= q.z;
    return *this;
}

Quaternion& Quaternion::operator*=(double s) noexcept {
    w *= s;
    x *= s;
    y *= s;
    z *= s;
    return *this;
}

Quaternion operator*(const Quaternion& p, const Quaternion& q) noexcept { return quat_mul(p, q); }

Quaternion quat_mul(const Quaternion& p, const Quaternion& q) noexcept {
    return {p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
            p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
            p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
            p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w};
}

Quaternion quat_conj(const Quaternion& q) noexcept { return {q.w, -q.x, -q.y, -q.z}; }

double quat_norm(const Quaternion& q) noexcept {
    return std::sqrt(q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z);
}

Quaternion quat_inverse(const Quaternion& q) {
    const double n2 = q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z;
    if (n2 == 0.0) throw std::domain_error("quaternion zero has no inverse");
    return quat_conj(q) * (1.0 / n2);
}

Multivector to_multivector(const Quaternion& q) {
    Multivector m(2);
    m[0] = q.w;
    m[1] = q.x;
    m[2] = q.y;
    m[3] = q.z;
    return m;
}

Quaternion to_quaternion(const Multivector& m) {
    if (m.generators() != 2) {
        throw std::invalid_argument("quaternions are identified with Cl(0,2) only");
    }
    return {m[0], m[1], m[2], m[3]};
}

}  // namespace dirichlet
