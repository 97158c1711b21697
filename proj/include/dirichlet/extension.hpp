#pragma once

// Harmonic and monogenic extensions of boundary data.
//
// Points of R^{n+1} are written (x0, x1, ..., xn). On the half-space x0 is
// the height y and (x1..xn) the boundary coordinates; on balls x0 is the
// first Cartesian coordinate.

#include <array>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "dirichlet/boundary.hpp"
#include "dirichlet/clifford.hpp"

namespace dirichlet {

/// ||Y_k(f)||^2 in L^2(S^{n-1}) for k = 0..K.
struct ProjectionNorms {
    int n = 2;
    std::vector<double> squared;
    double error = 0.0;

    double total() const;
};

enum class FieldAlgebra { clifford, quaternion };
enum class FieldDomain { ball, halfspace, whole };

/// Multivector-valued field on a domain of R^{n+1}.
struct ParavectorField {
    std::string id;
    FieldAlgebra algebra = FieldAlgebra::clifford;
    FieldDomain domain = FieldDomain::ball;
    int dimension = 3;     // number of coordinates x0..xn
    int generators = 2;    // algebra Cl(0, generators); quaternions use Cl(0,2)
    std::function<Multivector(std::span<const double>)> value;
    /// Analytic d/dx0; may be empty.
    std::function<Multivector(std::span<const double>)> d0;

    /// Element multiplying d/dx_k in D (e_k, or i, j, k for quaternions).
    Multivector unit(int k) const;
};

enum class Route { kernel, fourier };

// ---- balls and the disk ----------------------------------------------------

/// Spectral Poisson extension; `point` has 2 (disk) or n coordinates, |point| < 1.
double poisson_extend_ball(const BoundarySpec& f, std::span<const double> point);
/// Same value by quadrature of the Poisson kernel (1/omega)(1 - r^2)/|eta - x|^n.
double poisson_extend_ball_kernel(const BoundarySpec& f, std::span<const double> point);
/// Gradient of the spectral extension.
std::vector<double> poisson_gradient_ball(const BoundarySpec& f, std::span<const double> point);
/// Poisson kernel P_r(eta, xi) with r = |x|, normalized to unit mass.
double ball_poisson_kernel(int n, std::span<const double> eta, std::span<const double> x);

ProjectionNorms laplace_projection_norms(const BoundarySpec& f);

// ---- half-space ------------------------------------------------------------

/// u, v_k and first derivatives of the extension at (x, y).
struct HalfSpaceJet {
    double u = 0.0;
    double du_dy = 0.0;
    std::array<double, 3> du_dx{};
    std::array<double, 3> v{};
};

/// Kernel route: polar coordinates around x, closed-form spherical means of
/// the Gaussian terms (numeric ones for modulated terms in n >= 2).
HalfSpaceJet halfspace_jet(const GaussianFamily& f, std::span<const double> x, double y);

double poisson_extend_halfspace(const BoundarySpec& f, std::span<const double> x, double y,
                                Route route = Route::kernel);
/// k in 1..n.
double riesz_conjugate(const BoundarySpec& f, std::span<const double> x, double y, int k,
                       Route route = Route::kernel);
/// u + sum v_k e_k in Cl(0, n).
Multivector monogenic_extension_halfspace(const BoundarySpec& f, std::span<const double> x, double y);

/// Fourier route for (u, v_1..v_n) at (x, y); used as the independent check.
std::vector<double> halfspace_fourier_values(const GaussianFamily& f, std::span<const double> x, double y);

/// Field wrapper of monogenic_extension_halfspace with analytic d/dy.
ParavectorField halfspace_extension_field(const GaussianFamily& f);

/// Holomorphic polynomial sum c_k z^k, c_k = a_k - i b_k, in Cl(0,1) (i = e1).
ParavectorField disk_holomorphic_field(const CircleFourier& f);

// ---- catalog and residuals --------------------------------------------------

/// ball3_k1, ball3_k2, quat_k1, quat_k2, halfspace_cauchy(y0) or
/// halfspace_cauchy(y0,n). Unknown ids throw std::invalid_argument listing the catalog.
ParavectorField catalog_monogenic(const std::string& id);
std::vector<std::string> catalog_ids();

/// |D F| at `point` by centered differences with step h, D = 1/2 (d0 + sum unit_k d_k).
/// Throws std::domain_error if the stencil leaves the domain.
double dirac_residual(const ParavectorField& F, std::span<const double> point, double h);
/// Centered-difference conj(D) F = 1/2 (d0 - sum unit_k d_k) F.
Multivector conj_dirac_fd(const ParavectorField& F, std::span<const double> point, double h);
/// d0 F, analytic when available, else centered differences with step 1e-4.
Multivector d0_field(const ParavectorField& F, std::span<const double> point);

}  // namespace dirichlet
