#pragma once

// Quadrature rules, deterministic parallel reduction and the singular
// double integrators with exclusion-radius extrapolation.

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "dirichlet/clifford.hpp"

namespace dirichlet::quad {

/// Value with an a-posteriori error estimate.
struct Estimate {
    double value = 0.0;
    double error = 0.0;
};

/// Worker threads used by every parallel loop in the library (>= 1).
int worker_count();
void set_worker_count(int workers);

/// Runs body(i) for i in [0, count) on worker_count() threads. Each index is
/// processed exactly once; the first exception (lowest index) is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

/// Pairwise (fixed binary tree) summation.
double pairwise_sum(std::span<const double> values);

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    std::vector<double> x;
    std::vector<double> w;
};

/// Cached m-point Gauss-Legendre rule; thread safe, references stay valid.
const GaussRule& gauss_legendre(int m);

/// Appends m Gauss-Legendre nodes/weights mapped to [a, b].
void append_gauss(int m, double a, double b, std::vector<double>& x, std::vector<double>& w);

enum class DomainKind { circle, sphere2, sphere3, box, line, ray };

struct QuadratureRule {
    DomainKind kind = DomainKind::circle;
    int dim = 0;    // coordinates per node
    int level = 0;
    std::vector<double> nodes;    // size() * dim, row major
    std::vector<double> weights;

    std::size_t size() const noexcept { return weights.size(); }
    std::span<const double> node(std::size_t i) const {
        return {nodes.data() + i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
    }
};

/// Rule on S^{n-1} in R^n, n in {2, 3, 4}. Exact for polynomials of degree
/// <= 2 level - 1. Coordinate 0 is the polar axis.
QuadratureRule sphere_rule(int n, int level);

/// Tensor Gauss-Legendre rule on [-L, L]^n with 2 level panels of 8 nodes per axis.
QuadratureRule box_rule(int n, double half_width, int level);

/// Rule on all of R^n: x_i = c_i + scale tan(phi), Gauss-Legendre in phi
/// with 16 level nodes per axis. For integrands decaying faster than |x|^-2.
QuadratureRule line_rule(std::span<const double> center, double scale, int level);

/// sum_i w_i g(node_i) with pairwise summation. Throws std::domain_error
/// naming the node when g is not finite there.
double integrate(const QuadratureRule& rule, const std::function<double(std::span<const double>)>& g);
Multivector integrate(const QuadratureRule& rule, int generators,
                      const std::function<Multivector(std::span<const double>)>& g);

/// int_0^inf h(y) y^lambda dy. [0, Y] uses y = Y s^2, [Y, inf) uses y = Y / s,
/// both with 12 level Gauss-Legendre nodes; the error is the difference from
/// the half-resolution evaluation.
Estimate ray_integral(const std::function<double(double)>& h, double lambda, double cap, int level);

/// Decreasing exclusion radii (chord lengths on spheres, distances in R^n)
/// and the polynomial degree used for extrapolation to zero.
struct SingularSchedule {
    std::vector<double> radii;
    int order = 0;

    /// {0.04, 0.02, 0.01, 0.005, 0.0025}, order 4.
    static SingularSchedule standard();
    /// Throws std::invalid_argument unless radii are positive, strictly
    /// decreasing, at least three, and 1 <= order < radii.size().
    void validate() const;
    SingularSchedule scaled(double factor) const;
};

/// Extrapolates values[i] = I(radii[i]) to radius 0 (Neville). The error is
/// the spread of the two highest-order extrapolants. Throws
/// std::runtime_error("schedule too coarse") if I is not monotone.
Estimate extrapolate_to_zero(const SingularSchedule& schedule, std::span<const double> values);

using PairIntegrand = std::function<double(std::span<const double>, std::span<const double>)>;

/// int_{S^{n-1}} int_{S^{n-1}, |eta1-eta2| > eps} G dS dS extrapolated to eps -> 0,
/// n in {2, 3, 4}. The outer variable uses sphere_rule(n, level); the inner one
/// geodesic polar coordinates around eta1.
Estimate double_sphere_singular(int n, const PairIntegrand& G, int level, const SingularSchedule& schedule);

/// Same integral when G depends only on (eta1.e, eta2.e, eta1.eta2) for the
/// pole e = (1, 0, ..., 0); n in {3, 4}. Three-dimensional reduced coordinates.
Estimate double_sphere_singular_zonal(int n, const PairIntegrand& G, int level,
                                      const SingularSchedule& schedule);

/// Ball in R^n where the integrand varies (used to place radial breakpoints).
struct Feature {
    std::vector<double> center;
    double radius = 1.0;
};

/// int_{R^n} int_{|h| > eps} G(x, x + h) dh dx extrapolated to eps -> 0, for
/// symmetric G. The pair is weighted by a smooth partition of unity that
/// favours the point nearer `center`, so the outer integrand decays fast;
/// `scale` sets the outer mapping and the partition width. Radii in
/// `schedule` are multiplied by `scale`.
Estimate double_space_singular(int n, const PairIntegrand& G, std::span<const double> center, double scale,
                               std::span<const Feature> features, int level, const SingularSchedule& schedule);

}  // namespace dirichlet::quad
