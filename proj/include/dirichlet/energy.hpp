#pragma once

// Dirichlet energies by every route and the identity checks between them.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dirichlet/boundary.hpp"
#include "dirichlet/extension.hpp"
#include "dirichlet/quadrature.hpp"

namespace dirichlet {

using quad::Estimate;

enum class GeometryKind { disk, ball, halfspace, quaternion_ball, quaternion_halfspace };

struct Geometry {
    GeometryKind kind = GeometryKind::disk;
    /// disk: 2; ball: ambient dimension 3 or 4; half-space: boundary dimension 1..3;
    /// quaternion ball: 4; quaternion half-space: 3.
    int n = 2;

    static Geometry disk() { return {GeometryKind::disk, 2}; }
    static Geometry ball(int n);
    static Geometry halfspace(int n);
    static Geometry quaternion_ball() { return {GeometryKind::quaternion_ball, 4}; }
    static Geometry quaternion_halfspace() { return {GeometryKind::quaternion_halfspace, 3}; }

    /// disk, ball3, ball4, half1, half2, half3, quat_ball, quat_half.
    static Geometry parse(const std::string& name);
    std::string name() const;

    bool is_ball_like() const;    // disk, balls, quaternion ball
    bool is_halfspace_like() const;
    /// Dimension of the domain (number of coordinates x0..).
    int domain_dimension() const;

    bool operator==(const Geometry&) const = default;
};

enum class Form { gradient, fourier, double_integral, ahlfors, ahlfors_series, h2norm, h_half_seminorm, transport };

/// gradient, fourier, double, ahlfors, ahlforsSeries, h2norm, hHalfSeminorm, transport.
std::string form_name(Form f);
Form parse_form(const std::string& name);
/// Forms defined for the geometry, in canonical order.
std::vector<Form> forms_for(const Geometry& g);
/// Forms asserted equal to one another.
bool is_identity_form(Form f);

/// Level 0 selects the geometry default everywhere below.
Estimate gradient_energy(const Geometry& g, const BoundarySpec& f, int level = 0);
Estimate fourier_form_energy(const Geometry& g, const BoundarySpec& f);
Estimate double_integral_energy(const Geometry& g, const BoundarySpec& f, int level = 0,
                                const quad::SingularSchedule& schedule = quad::SingularSchedule::standard());

/// Distances to the boundary along which the Ahlfors integral is taken:
/// radii r = 1 - d on balls, heights y = d * scale on half-spaces.
quad::SingularSchedule ahlfors_ball_schedule();
quad::SingularSchedule ahlfors_halfspace_schedule();

/// Boundary integral 1/2 Sc int conj(F) nu dbar F dS on the sphere |x| = r or
/// the plane x0 = y, extrapolated to the boundary. Half-spaces use `center`
/// and `scale` to place the quadrature. Throws std::runtime_error("field not
/// monogenic") when the Dirac residual at probe points exceeds 1e-4.
Estimate ahlfors_boundary_energy(const Geometry& g, const ParavectorField& F, const quad::SingularSchedule& limit,
                                 int level = 0, std::span<const double> center = {}, double scale = 1.0);
/// Ahlfors integrand at one radius (balls) or height (half-spaces), no limit.
double ahlfors_at(const Geometry& g, const ParavectorField& F, double radius_or_height, int level = 0,
                  std::span<const double> center = {}, double scale = 1.0);

/// Volume integral of |conj(D) F|^2 = |d0 F|^2 over the domain.
Estimate volume_dbar_energy(const Geometry& g, const ParavectorField& F, int level = 0,
                            std::span<const double> center = {}, double scale = 1.0);

/// 1/2 sum_{k>=1} (k + n/2) ||Y_k||^2 for the ball B_{n+1}; n >= 2.
double ball_ahlfors_series(int n, const ProjectionNorms& norms);

struct EquivalenceRecord {
    double lhs = 0.0;            // ball_ahlfors_series
    double rhs = 0.0;            // 1/2 sum k||Y_k||^2 + n/4 (sum ||Y_k||^2 - ||Y_0||^2)
    double difference = 0.0;
    double literal_rhs = 0.0;    // same with |u(0)|^2 in place of ||Y_0||^2
    double literal_difference = 0.0;
};
/// f is zonal on S^n (ZonalGegenbauer with n + 1 components).
EquivalenceRecord ball_equivalence_check(int n, const BoundarySpec& f);

enum class GRoute { direct, spectral };
/// ||g^lambda(f)||_2^2 for Gaussian data on R^1 or R^2.
Estimate g_lambda_norm(const BoundarySpec& f, double lambda, GRoute route, int level = 0);

/// int |t|^p |hat f(t)|^2 dt for Gaussian data.
Estimate spectral_integral(const GaussianFamily& f, double p);

struct TransportRecord {
    Estimate disk;
    Estimate line;
    double relative_difference = 0.0;
};
/// Disk double integral of f against the line double integral of f o L,
/// L(x) = (x - i)/(x + i).
TransportRecord conformal_transport_check(const BoundarySpec& f, int level = 0,
                                          const quad::SingularSchedule& schedule = quad::SingularSchedule::standard());
/// f(L(x)) for circle data.
double transported_boundary(const BoundarySpec& f, double x);

double h2_norm_squared(const Geometry& g, const BoundarySpec& f);
double h_half_seminorm_squared(const Geometry& g, const BoundarySpec& f);

/// Validates that f is admissible for g; throws std::invalid_argument.
void check_admissible(const Geometry& g, const BoundarySpec& f);

struct EnergyReport {
    std::string case_id;
    Geometry geometry;
    std::string function_id;
    std::map<std::string, Estimate> values;    // keyed by form name
    double max_pairwise_relative_deviation = 0.0;
    bool pass = false;
    /// Ratio ahlforsSeries / gradient (or / fourier) when requested.
    std::optional<double> ahlfors_series_ratio;
    std::vector<std::string> failures;
    std::map<std::string, double> timings;    // seconds per form
};

struct VerifyRequest {
    std::string case_id;
    Geometry geometry;
    std::string function_id;
    BoundarySpec spec;
    std::vector<Form> forms;
    std::optional<std::string> field;    // catalog id for the Ahlfors form
    double tolerance = 1e-2;
    int level = 0;
    quad::SingularSchedule schedule = quad::SingularSchedule::standard();
    /// Selects extra random probe points for the Ahlfors monogenic check.
    std::uint64_t seed = 0;
};

/// Throws std::invalid_argument for requests that cannot be run (form not
/// defined for the geometry, missing field); tolerance violations and
/// numerical failures are reported with pass = false.
void check_request(const VerifyRequest& request);
EnergyReport verify_identities(const VerifyRequest& request);

}  // namespace dirichlet
