#pragma once

// Gegenbauer polynomials normalized by P_k^n(1) = 1, the spherical-harmonic
// projection constants c_{n,k}, sphere areas and exact half-integer Gamma.

#include <span>
#include <vector>

namespace dirichlet::special {

/// Gamma(m / 2) for a positive integer m, evaluated exactly from
/// Gamma(1/2) = sqrt(pi), Gamma(1) = 1 and the functional equation.
double gamma_half_integer(int twice_argument);

/// Surface area omega_m of the unit sphere S^m in R^{m+1}.
double sphere_area(int m);

/// c_{n,k}; c_{n,0} = 1 / omega_{n-1} for every n.
double coeff_c(int n, int k);

/// P_k^n(t) on S^{n-1} (Chebyshev for n = 2, Legendre for n = 3).
/// Throws std::domain_error for t outside [-1, 1].
double gegenbauer(int n, int k, double t);
double gegenbauer_derivative(int n, int k, double t);

/// Evaluates every degree 0..max_degree at once by the normalized
/// three-term recurrence. Immutable after construction.
class GegenbauerTable {
public:
    GegenbauerTable(int n, int max_degree);

    int dimension() const noexcept { return n_; }
    int max_degree() const noexcept { return max_degree_; }

    /// values[k] = P_k^n(t), k = 0..max_degree.
    void evaluate(double t, std::span<double> values) const;
    void evaluate(double t, std::span<double> values, std::span<double> derivatives) const;

    /// sum_k coeffs[k] P_k^n(t) (coeffs may be shorter than max_degree + 1).
    double series(std::span<const double> coeffs, double t) const;

private:
    int n_;
    int max_degree_;
    // Recurrence P_k = (a_k t P_{k-1} - b_k P_{k-2}) / d_k.
    std::vector<double> a_;
    std::vector<double> b_;
    std::vector<double> inv_d_;
};

/// exp(-z) I_nu(z) for nu in {0, 1}, z >= 0.
double bessel_i_scaled(int nu, double z);

}  // namespace dirichlet::special
