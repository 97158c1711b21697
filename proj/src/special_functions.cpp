#include "dirichlet/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace dirichlet::special {

namespace {

double clamp_unit(double t) {
    if (!(std::abs(t) <= 1.0 + 1e-12)) {
        throw std::domain_error("Gegenbauer argument outside [-1, 1]: " + std::to_string(t));
    }
    return std::clamp(t, -1.0, 1.0);
}

void check_dimension(int n) {
    if (n < 2) throw std::invalid_argument("Gegenbauer polynomials need n >= 2");
}

}  // namespace

double gamma_half_integer(int twice_argument) {
    if (twice_argument <= 0) throw std::invalid_argument("Gamma argument must be positive");
    double value = (twice_argument % 2 == 0) ? 1.0 : std::sqrt(std::numbers::pi);
    for (int m = (twice_argument % 2 == 0) ? 2 : 1; m + 2 <= twice_argument; m += 2) {
        value *= 0.5 * m;
    }
    return value;
}

double sphere_area(int m) {
    if (m < 0) throw std::invalid_argument("sphere dimension must be non-negative");
    if (m == 0) return 2.0;
    // omega_m = 2 pi^{(m+1)/2} / Gamma((m+1)/2)
    return 2.0 * std::pow(std::numbers::pi, 0.5 * (m + 1)) / gamma_half_integer(m + 1);
}

double coeff_c(int n, int k) {
    check_dimension(n);
    if (k < 0) throw std::invalid_argument("degree must be non-negative");
    const double inv_area = 1.0 / sphere_area(n - 1);
    if (k == 0) return inv_area;
    // (n+2k-2) Gamma(n+k-1) / ((n+k-2) k! Gamma(n-1)); the Gamma ratio is the
    // rising product (n-1)(n)...(n+k-2), which is divided by k! term by term.
    double ratio = 1.0;
    for (int j = 1; j <= k; ++j) {
        ratio *= static_cast<double>(n + j - 2) / j;
    }
    return inv_area * (n + 2 * k - 2) * ratio / (n + k - 2);
}

GegenbauerTable::GegenbauerTable(int n, int max_degree)
    : n_(n), max_degree_(max_degree), a_(max_degree + 1), b_(max_degree + 1), inv_d_(max_degree + 1) {
    check_dimension(n);
    if (max_degree < 0) throw std::invalid_argument("max degree must be non-negative");
    for (int k = 2; k <= max_degree; ++k) {
        a_[k] = 2.0 * k + n - 4;
        b_[k] = k - 1.0;
        inv_d_[k] = 1.0 / (k + n - 3.0);
    }
}

void GegenbauerTable::evaluate(double t, std::span<double> values) const {
    t = clamp_unit(t);
    const auto count = std::min<std::size_t>(values.size(), max_degree_ + 1);
    if (count == 0) return;
    values[0] = 1.0;
    if (count == 1) return;
    values[1] = t;
    for (std::size_t k = 2; k < count; ++k) {
        values[k] = (a_[k] * t * values[k - 1] - b_[k] * values[k - 2]) * inv_d_[k];
    }
}

void GegenbauerTable::evaluate(double t, std::span<double> values, std::span<double> derivatives) const {
    t = clamp_unit(t);
    const auto count = std::min({values.size(), derivatives.size(), std::size_t(max_degree_ + 1)});
    if (count == 0) return;
    values[0] = 1.0;
    derivatives[0] = 0.0;
    if (count == 1) return;
    values[1] = t;
    derivatives[1] = 1.0;
    for (std::size_t k = 2; k < count; ++k) {
        values[k] = (a_[k] * t * values[k - 1] - b_[k] * values[k - 2]) * inv_d_[k];
        derivatives[k] =
            (a_[k] * (values[k - 1] + t * derivatives[k - 1]) - b_[k] * derivatives[k - 2]) * inv_d_[k];
    }
}

double GegenbauerTable::series(std::span<const double> coeffs, double t) const {
    if (coeffs.size() > static_cast<std::size_t>(max_degree_) + 1) {
        throw std::invalid_argument("series degree exceeds table");
    }
    std::vector<double> p(coeffs.size());
    evaluate(t, p);
    double s = 0.0;
    for (std::size_t k = 0; k < coeffs.size(); ++k) s += coeffs[k] * p[k];
    return s;
}

double gegenbauer(int n, int k, double t) {
    if (k < 0) throw std::invalid_argument("degree must be non-negative");
    GegenbauerTable table(n, k);
    std::vector<double> p(k + 1);
    table.evaluate(t, p);
    return p[k];
}

double gegenbauer_derivative(int n, int k, double t) {
    if (k < 0) throw std::invalid_argument("degree must be non-negative");
    GegenbauerTable table(n, k);
    std::vector<double> p(k + 1), dp(k + 1);
    table.evaluate(t, p, dp);
    return dp[k];
}

double bessel_i_scaled(int nu, double z) {
    if (nu != 0 && nu != 1) throw std::invalid_argument("bessel_i_scaled supports nu = 0, 1");
    if (z < 0.0) throw std::domain_error("bessel_i_scaled needs z >= 0");
    if (z < 600.0) return std::cyl_bessel_i(static_cast<double>(nu), z) * std::exp(-z);
    // Large-argument expansion; six terms are below double rounding for z >= 600.
    const double mu = 4.0 * nu * nu;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k <= 6; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= -(mu - odd * odd) / (k * 8.0 * z);
        sum += term;
    }
    return sum / std::sqrt(2.0 * std::numbers::pi * z);
}

}  // namespace dirichlet::special
