#pragma once

// Boundary data descriptions shared by every energy route.

#include <span>
#include <string>
#include <variant>
#include <vector>

namespace dirichlet {

/// f(theta) = a0 + sum_k (a_k cos k theta + b_k sin k theta); theta is
/// measured from the x0 axis of the disk.
struct CircleFourier {
    struct Term {
        int k = 1;
        double a = 0.0;
        double b = 0.0;
    };
    double a0 = 0.0;
    std::vector<Term> terms;

    /// Dense coefficients a[0..K], b[0..K] (duplicate degrees accumulate).
    void dense(std::vector<double>& a, std::vector<double>& b) const;
    int max_degree() const;
};

/// f(xi) = sum_k gamma[k] P_k^n(xi . pole) on S^{n-1}.
struct ZonalGegenbauer {
    int n = 3;
    std::vector<double> pole;    // unit vector in R^n (normalized on validation)
    std::vector<double> gamma;

    int max_degree() const { return static_cast<int>(gamma.size()) - 1; }
};

/// f(x) = sum A exp(-pi |x - c|^2 / w^2) cos(2 pi a . x) on R^n.
struct GaussianFamily {
    struct Term {
        double amplitude = 1.0;
        std::vector<double> center;
        double width = 1.0;
        std::vector<double> frequency;    // empty means no modulation
    };
    int n = 1;
    std::vector<Term> terms;
};

/// Uniform samples f(2 pi j / N), j = 0..N-1, on the circle.
struct SampledGrid {
    std::string domain = "circle";
    std::vector<double> samples;
};

using BoundarySpec = std::variant<CircleFourier, ZonalGegenbauer, GaussianFamily, SampledGrid>;

inline constexpr int kMaxBandLimit = 64;

/// Checks invariants (band limit, dimensions, positive widths) and returns a
/// normalized copy (unit pole, padded frequencies). Throws std::invalid_argument.
BoundarySpec validate(const BoundarySpec& spec);

/// Point on the boundary: (cos t, sin t) for the circle, a unit vector for
/// spheres, a point of R^n for Gaussian families.
double evaluate_boundary(const BoundarySpec& spec, std::span<const double> point);

/// c * f.
BoundarySpec scaled(const BoundarySpec& spec, double c);

/// Every term's center shifted by `shift` (Gaussian families only).
GaussianFamily translated(const GaussianFamily& g, std::span<const double> shift);

/// Pole axis replaced (zonal only).
ZonalGegenbauer with_pole(const ZonalGegenbauer& z, std::span<const double> pole);

/// Discrete Fourier analysis of circle samples; `aliasing` receives the
/// magnitude of the Nyquist-adjacent coefficients as an error indicator.
CircleFourier to_circle_fourier(const SampledGrid& grid, double* aliasing = nullptr);

/// Fourier transform hat f(t) = int f(x) exp(2 pi i t.x) dx, real and imaginary parts.
void gaussian_fourier(const GaussianFamily& g, std::span<const double> t, double& re, double& im);

/// ||f||_{L^2(R^n)}^2 in closed form.
double gaussian_l2_squared(const GaussianFamily& g);

/// Centroid and largest width, used to place quadrature.
void gaussian_extent(const GaussianFamily& g, std::vector<double>& centroid, double& max_width, double& min_width);

}  // namespace dirichlet
