#include "dirichlet/extension.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "dirichlet/quadrature.hpp"
#include "dirichlet/special_functions.hpp"

namespace dirichlet {

namespace {

constexpr double kPi = std::numbers::pi;

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
}

CircleFourier as_circle(const BoundarySpec& f) {
    if (const auto* c = std::get_if<CircleFourier>(&f)) return *c;
    if (const auto* s = std::get_if<SampledGrid>(&f)) return to_circle_fourier(*s);
    throw std::invalid_argument("expected circle data");
}

bool is_circle(const BoundarySpec& f) {
    return std::holds_alternative<CircleFourier>(f) || std::holds_alternative<SampledGrid>(f);
}

const GaussianFamily& as_gaussian(const BoundarySpec& f) {
    if (const auto* g = std::get_if<GaussianFamily>(&f)) return *g;
    throw std::invalid_argument("half-space extensions need Gaussian-family boundary data");
}

// Families with every center and frequency filled in are used as is;
// anything else is validated into `storage`.
const GaussianFamily& normalized(const GaussianFamily& f, GaussianFamily& storage) {
    for (const auto& t : f.terms) {
        if (static_cast<int>(t.center.size()) != f.n || static_cast<int>(t.frequency.size()) != f.n) {
            storage = std::get<GaussianFamily>(validate(f));
            return storage;
        }
    }
    return f;
}

const ZonalGegenbauer& normalized(const ZonalGegenbauer& z, ZonalGegenbauer& storage) {
    if (static_cast<int>(z.pole.size()) == z.n) return z;
    storage = std::get<ZonalGegenbauer>(validate(z));
    return storage;
}

double gaussian_value(const GaussianFamily& f, std::span<const double> x) {
    double s = 0.0;
    for (const auto& t : f.terms) {
        double d2 = 0.0, phase = 0.0;
        for (int k = 0; k < f.n; ++k) {
            const double d = x[k] - t.center[k];
            d2 += d * d;
            phase += t.frequency[k] * x[k];
        }
        s += t.amplitude * std::exp(-kPi * d2 / (t.width * t.width)) * std::cos(2.0 * kPi * phase);
    }
    return s;
}

void check_interior(std::span<const double> point) {
    if (!(norm2(point) < 1.0)) throw std::domain_error("point must lie inside the unit ball");
}

void check_height(double y) {
    if (!(y > 0.0)) throw std::domain_error("half-space height y must be positive");
}

// Spherical means of the boundary data around x at radius r:
// m0 = int f(x + r s) ds, m[j] = int s_j f(x + r s) ds over S^{n-1}.
class SphericalMeans {
public:
    SphericalMeans(const GaussianFamily& f, std::span<const double> x) : f_(f), n_(f.n) {
        x_.assign(x.begin(), x.end());
        for (const auto& t : f.terms) {
            Term term;
            term.amplitude = t.amplitude;
            term.width = t.width;
            double d2 = 0.0;
            term.modulated = false;
            for (int k = 0; k < n_; ++k) {
                const double d = x[k] - t.center[k];
                term.delta[k] = d;
                d2 += d * d;
                if (t.frequency[k] != 0.0) term.modulated = true;
            }
            term.d = std::sqrt(d2);
            for (int k = 0; k < n_; ++k) term.dhat[k] = term.d > 0.0 ? term.delta[k] / term.d : 0.0;
            terms_.push_back(term);
            if (term.modulated) any_modulated_ = true;
        }
        if (any_modulated_ && n_ > 1) sphere_ = quad::sphere_rule(n_, 24);
    }

    void operator()(double r, double& m0, std::array<double, 3>& m) const {
        m0 = 0.0;
        m = {0.0, 0.0, 0.0};
        for (std::size_t i = 0; i < terms_.size(); ++i) {
            const Term& t = terms_[i];
            if (t.modulated || n_ == 1) {
                numeric(f_.terms[i], r, m0, m);
                continue;
            }
            const double w2 = t.width * t.width;
            const double radial = t.amplitude * std::exp(-kPi * (t.d - r) * (t.d - r) / w2);
            if (radial == 0.0) continue;
            const double kappa = 2.0 * kPi * r * t.d / w2;
            double s0, s1;
            if (n_ == 2) {
                s0 = 2.0 * kPi * special::bessel_i_scaled(0, kappa);
                s1 = 2.0 * kPi * special::bessel_i_scaled(1, kappa);
            } else {
                if (kappa < 0.1) {
                    const double k2 = kappa * kappa;
                    const double e = std::exp(-kappa);
                    s0 = 4.0 * kPi * e * (1.0 + k2 / 6.0 + k2 * k2 / 120.0 + k2 * k2 * k2 / 5040.0);
                    s1 = 4.0 * kPi * e * kappa * (1.0 / 3.0 + k2 / 30.0 + k2 * k2 / 840.0 + k2 * k2 * k2 / 45360.0);
                } else {
                    const double e2 = std::exp(-2.0 * kappa);
                    s0 = 4.0 * kPi * (-std::expm1(-2.0 * kappa)) / (2.0 * kappa);
                    s1 = 2.0 * kPi * (kappa * (1.0 + e2) - (1.0 - e2)) / (kappa * kappa);
                }
            }
            m0 += radial * s0;
            for (int k = 0; k < n_; ++k) m[k] -= radial * s1 * t.dhat[k];
        }
    }

private:
    struct Term {
        double amplitude = 0.0;
        double width = 1.0;
        double d = 0.0;
        std::array<double, 3> delta{};
        std::array<double, 3> dhat{};
        bool modulated = false;
    };

    double term_value(const GaussianFamily::Term& t, std::span<const double> p) const {
        double d2 = 0.0, phase = 0.0;
        for (int k = 0; k < n_; ++k) {
            const double d = p[k] - t.center[k];
            d2 += d * d;
            phase += t.frequency[k] * p[k];
        }
        return t.amplitude * std::exp(-kPi * d2 / (t.width * t.width)) * std::cos(2.0 * kPi * phase);
    }

    void numeric(const GaussianFamily::Term& t, double r, double& m0, std::array<double, 3>& m) const {
        std::array<double, 3> p{};
        if (n_ == 1) {
            p[0] = x_[0] + r;
            const double fp = term_value(t, {p.data(), 1});
            p[0] = x_[0] - r;
            const double fm = term_value(t, {p.data(), 1});
            m0 += fp + fm;
            m[0] += fp - fm;
            return;
        }
        for (std::size_t i = 0; i < sphere_.size(); ++i) {
            const auto s = sphere_.node(i);
            for (int k = 0; k < n_; ++k) p[k] = x_[k] + r * s[k];
            const double v = sphere_.weights[i] * term_value(t, {p.data(), static_cast<std::size_t>(n_)});
            m0 += v;
            for (int k = 0; k < n_; ++k) m[k] += v * s[k];
        }
    }

    const GaussianFamily& f_;
    int n_;
    std::vector<double> x_;
    std::vector<Term> terms_;
    bool any_modulated_ = false;
    quad::QuadratureRule sphere_;
};

// Radial panels around a boundary point at height y: geometric near 0 on the
// scale of y, uniform over each term's support.
void radial_nodes(const GaussianFamily& f, std::span<const double> x, double y, std::vector<double>& r,
                  std::vector<double>& w, double& r_end) {
    std::vector<double> cuts{0.0};
    r_end = 0.0;
    for (const auto& t : f.terms) {
        double d2 = 0.0, fnorm = 0.0;
        for (int k = 0; k < f.n; ++k) {
            d2 += (x[k] - t.center[k]) * (x[k] - t.center[k]);
            fnorm += t.frequency[k] * t.frequency[k];
        }
        const double d = std::sqrt(d2);
        const double R = 5.0 * t.width;
        double step = 0.5 * t.width;
        if (fnorm > 0.0) step = std::min(step, 0.25 / std::sqrt(fnorm));
        const double lo = std::max(0.0, d - R);
        const double hi = d + R;
        const int pieces = std::max(1, static_cast<int>(std::ceil((hi - lo) / step)));
        for (int p = 0; p <= pieces; ++p) cuts.push_back(lo + (hi - lo) * p / pieces);
        r_end = std::max(r_end, hi);
    }
    if (r_end == 0.0) return;
    for (double b = 0.25 * y; b < r_end; b *= 2.0) cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    std::vector<double> unique;
    for (double c : cuts) {
        if (c > r_end) continue;
        if (unique.empty() || c - unique.back() > 1e-12 * (1.0 + c)) unique.push_back(c);
    }
    if (unique.back() < r_end) unique.push_back(r_end);
    for (std::size_t i = 0; i + 1 < unique.size(); ++i) quad::append_gauss(12, unique[i], unique[i + 1], r, w);
}

// int_0^Phi sin^{n-1}(phi) dphi.
double sine_power_integral(int n, double phi) {
    switch (n) {
    case 1: return phi;
    case 2: return 1.0 - std::cos(phi);
    case 3: return 0.5 * (phi - std::sin(phi) * std::cos(phi));
    default: throw std::invalid_argument("unsupported boundary dimension");
    }
}

std::complex<double> holomorphic_value(const std::vector<std::complex<double>>& c, std::complex<double> z) {
    std::complex<double> s = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) s = s * z + c[k];
    return s;
}

std::complex<double> holomorphic_derivative(const std::vector<std::complex<double>>& c, std::complex<double> z) {
    std::complex<double> s = 0.0;
    for (std::size_t k = c.size(); k-- > 1;) s = s * z + static_cast<double>(k) * c[k];
    return s;
}

}  // namespace

double ProjectionNorms::total() const {
    double s = 0.0;
    for (double v : squared) s += v;
    return s;
}

Multivector ParavectorField::unit(int k) const {
    if (k < 1 || k >= dimension) throw std::invalid_argument("coordinate index outside the field dimension");
    if (algebra == FieldAlgebra::quaternion) return Multivector::blade(2, static_cast<unsigned>(k));
    return Multivector::blade(generators, 1u << (k - 1));
}

double ball_poisson_kernel(int n, std::span<const double> eta, std::span<const double> x) {
    if (static_cast<int>(eta.size()) != n || static_cast<int>(x.size()) != n) {
        throw std::invalid_argument("Poisson kernel dimension mismatch");
    }
    const double r2 = norm2(x);
    double d2 = 0.0;
    for (int k = 0; k < n; ++k) d2 += (eta[k] - x[k]) * (eta[k] - x[k]);
    return (1.0 - r2) / (special::sphere_area(n - 1) * std::pow(d2, 0.5 * n));
}

double poisson_extend_ball(const BoundarySpec& f, std::span<const double> point) {
    check_interior(point);
    if (is_circle(f)) {
        const CircleFourier c = as_circle(f);
        if (point.size() != 2) throw std::invalid_argument("disk points have 2 coordinates");
        const double r = std::sqrt(norm2(point));
        const double th = std::atan2(point[1], point[0]);
        double s = c.a0;
        for (const auto& t : c.terms) s += std::pow(r, t.k) * (t.a * std::cos(t.k * th) + t.b * std::sin(t.k * th));
        return s;
    }
    const auto* zp = std::get_if<ZonalGegenbauer>(&f);
    if (!zp) throw std::invalid_argument("ball extensions need circle or zonal boundary data");
    ZonalGegenbauer storage;
    const ZonalGegenbauer* z = &normalized(*zp, storage);
    if (static_cast<int>(point.size()) != z->n) throw std::invalid_argument("point dimension mismatch");
    const double r = std::sqrt(norm2(point));
    if (r == 0.0) return z->gamma[0];
    double t = 0.0;
    for (int k = 0; k < z->n; ++k) t += point[k] * z->pole[k];
    t = std::clamp(t / r, -1.0, 1.0);
    std::vector<double> p(z->gamma.size());
    special::GegenbauerTable(z->n, z->max_degree()).evaluate(t, p);
    double s = 0.0, rk = 1.0;
    for (std::size_t k = 0; k < p.size(); ++k, rk *= r) s += z->gamma[k] * rk * p[k];
    return s;
}

double poisson_extend_ball_kernel(const BoundarySpec& f, std::span<const double> point) {
    check_interior(point);
    int n = 2;
    int degree = 0;
    if (is_circle(f)) {
        degree = as_circle(f).max_degree();
    } else if (const auto* z = std::get_if<ZonalGegenbauer>(&f)) {
        n = z->n;
        degree = z->max_degree();
    } else {
        throw std::invalid_argument("ball extensions need circle or zonal boundary data");
    }
    if (static_cast<int>(point.size()) != n) throw std::invalid_argument("point dimension mismatch");
    const double r = std::sqrt(norm2(point));
    // The kernel's spherical-harmonic tail decays like r^k; choose the rule so
    // the neglected degrees are below 1e-14.
    int level = degree + 4;
    if (r > 0.0) level += static_cast<int>(std::ceil(0.5 * std::log(1e-14) / std::log(r)));
    level = std::min(level, n == 2 ? 4000 : (n == 3 ? 220 : 90));
    const quad::QuadratureRule rule = quad::sphere_rule(n, level);
    return quad::integrate(rule, [&](std::span<const double> eta) {
        return ball_poisson_kernel(n, eta, point) * evaluate_boundary(f, eta);
    });
}

std::vector<double> poisson_gradient_ball(const BoundarySpec& f, std::span<const double> point) {
    check_interior(point);
    if (is_circle(f)) {
        const CircleFourier c = as_circle(f);
        std::vector<std::complex<double>> coeff(c.max_degree() + 1, 0.0);
        coeff[0] = c.a0;
        for (const auto& t : c.terms) coeff[t.k] += std::complex<double>(t.a, -t.b);
        const std::complex<double> d = holomorphic_derivative(coeff, {point[0], point[1]});
        return {d.real(), -d.imag()};
    }
    const auto* zp = std::get_if<ZonalGegenbauer>(&f);
    if (!zp) throw std::invalid_argument("ball extensions need circle or zonal boundary data");
    ZonalGegenbauer storage;
    const ZonalGegenbauer* z = &normalized(*zp, storage);
    const int n = z->n;
    if (static_cast<int>(point.size()) != n) throw std::invalid_argument("point dimension mismatch");
    std::vector<double> grad(n, 0.0);
    const double r = std::sqrt(norm2(point));
    if (r == 0.0) {
        if (z->gamma.size() > 1) {
            for (int k = 0; k < n; ++k) grad[k] = z->gamma[1] * z->pole[k];
        }
        return grad;
    }
    double t = 0.0;
    for (int k = 0; k < n; ++k) t += point[k] * z->pole[k];
    t = std::clamp(t / r, -1.0, 1.0);
    const int K = z->max_degree();
    std::vector<double> p(K + 1), dp(K + 1);
    special::GegenbauerTable(n, K).evaluate(t, p, dp);
    // grad |x|^k P(x.e/|x|) = k |x|^{k-2} x P + |x|^{k-1} P' (e - t x/|x|)
    double radial = 0.0, tangential = 0.0;
    for (int k = 1; k <= K; ++k) {
        const double rk1 = std::pow(r, k - 1);
        radial += z->gamma[k] * k * rk1 * p[k];
        tangential += z->gamma[k] * rk1 * dp[k];
    }
    for (int k = 0; k < n; ++k) {
        const double xhat = point[k] / r;
        grad[k] = radial * xhat + tangential * (z->pole[k] - t * xhat);
    }
    return grad;
}

ProjectionNorms laplace_projection_norms(const BoundarySpec& f) {
    ProjectionNorms out;
    if (const auto* s = std::get_if<SampledGrid>(&f)) {
        double aliasing = 0.0;
        const CircleFourier c = to_circle_fourier(*s, &aliasing);
        out = laplace_projection_norms(BoundarySpec{c});
        out.error = kPi * aliasing * aliasing * (c.max_degree() + 1);
        return out;
    }
    if (const auto* c = std::get_if<CircleFourier>(&f)) {
        std::vector<double> a, b;
        c->dense(a, b);
        out.n = 2;
        out.squared.resize(a.size());
        out.squared[0] = 2.0 * kPi * a[0] * a[0];
        for (std::size_t k = 1; k < a.size(); ++k) out.squared[k] = kPi * (a[k] * a[k] + b[k] * b[k]);
        return out;
    }
    if (const auto* z = std::get_if<ZonalGegenbauer>(&f)) {
        out.n = z->n;
        out.squared.resize(z->gamma.size());
        for (std::size_t k = 0; k < z->gamma.size(); ++k) {
            out.squared[k] = z->gamma[k] * z->gamma[k] / special::coeff_c(z->n, static_cast<int>(k));
        }
        return out;
    }
    throw std::invalid_argument("projection norms are defined for circle and sphere data");
}

HalfSpaceJet halfspace_jet(const GaussianFamily& family, std::span<const double> x, double y) {
    check_height(y);
    GaussianFamily storage;
    const GaussianFamily& f = normalized(family, storage);
    const int n = f.n;
    if (static_cast<int>(x.size()) != n) throw std::invalid_argument("point dimension mismatch");
    HalfSpaceJet jet;
    if (f.terms.empty()) return jet;

    std::vector<double> r, w;
    double r_end = 0.0;
    radial_nodes(f, x, y, r, w, r_end);
    const SphericalMeans means(f, x);
    const double fx = gaussian_value(f, x);
    const double omega = special::sphere_area(n - 1);
    const double a = 2.0 / special::sphere_area(n);
    const double m = 0.5 * (n + 1);
    const double y2 = y * y;

    double su = 0.0, sdy = 0.0;
    std::array<double, 3> sdx{}, sv{};
    for (std::size_t i = 0; i < r.size(); ++i) {
        double m0;
        std::array<double, 3> mj;
        means(r[i], m0, mj);
        const double ri = r[i];
        const double q = y2 + ri * ri;
        const double qm = std::pow(q, -m);
        const double rn1 = std::pow(ri, n - 1);
        const double excess = m0 - omega * fx;
        su += w[i] * a * y * rn1 * qm * excess;
        sdy += w[i] * a * rn1 * (ri * ri - n * y2) * qm / q * excess;
        const double kdx = w[i] * a * (n + 1) * y * rn1 * ri * qm / q;
        const double kv = w[i] * a * rn1 * ri * qm;
        for (int k = 0; k < n; ++k) {
            sdx[k] += kdx * mj[k];
            sv[k] += kv * mj[k];
        }
    }
    const double phi = std::atan2(r_end, y);
    jet.u = su + fx * omega * a * sine_power_integral(n, phi);
    jet.du_dy = sdy - omega * fx * a * std::pow(r_end, n) * std::pow(y2 + r_end * r_end, -m);
    jet.du_dx = sdx;
    jet.v = sv;
    return jet;
}

std::vector<double> halfspace_fourier_values(const GaussianFamily& family, std::span<const double> x, double y) {
    check_height(y);
    GaussianFamily storage;
    const GaussianFamily& f = normalized(family, storage);
    const int n = f.n;
    if (static_cast<int>(x.size()) != n) throw std::invalid_argument("point dimension mismatch");
    std::vector<double> out(n + 1, 0.0);
    if (f.terms.empty()) return out;
    double T = 0.0, reach = 0.0, wmax = 0.0;
    for (const auto& t : f.terms) {
        double fn = 0.0, dn = 0.0;
        for (int k = 0; k < n; ++k) {
            fn += t.frequency[k] * t.frequency[k];
            dn += (t.center[k] - x[k]) * (t.center[k] - x[k]);
        }
        T = std::max(T, std::sqrt(fn) + 7.0 / t.width);
        reach = std::max(reach, std::sqrt(dn) + std::sqrt(fn) + 1.0);
        wmax = std::max(wmax, t.width);
    }
    const double step = 0.25 / (reach + wmax);
    const int panels = static_cast<int>(std::ceil(T / step));
    std::vector<double> rho, wrho;
    for (int p = 0; p < panels; ++p) quad::append_gauss(12, T * p / panels, T * (p + 1) / panels, rho, wrho);
    std::vector<double> sig, wsig;
    if (n == 1) {
        sig = {1.0, -1.0};
        wsig = {1.0, 1.0};
    } else {
        const int level = 16 + static_cast<int>(std::ceil(2.0 * kPi * T * reach));
        const auto rule = quad::sphere_rule(n, n == 2 ? level : std::min(level, 160));
        sig = rule.nodes;
        wsig = rule.weights;
    }
    std::vector<std::vector<double>> terms(n + 1, std::vector<double>(rho.size(), 0.0));
    quad::parallel_for(rho.size(), [&](std::size_t i) {
        std::array<double, 3> t{};
        std::vector<double> acc(n + 1, 0.0);
        const double damp = std::exp(-2.0 * kPi * rho[i] * y) * std::pow(rho[i], n - 1) * wrho[i];
        for (std::size_t s = 0; s < wsig.size(); ++s) {
            double phase = 0.0;
            for (int k = 0; k < n; ++k) {
                t[k] = rho[i] * sig[s * n + k];
                phase += t[k] * x[k];
            }
            double re, im;
            gaussian_fourier(f, {t.data(), static_cast<std::size_t>(n)}, re, im);
            const double c = std::cos(2.0 * kPi * phase);
            const double sn = std::sin(2.0 * kPi * phase);
            // Z = hat f(t) exp(-2 pi i t.x); u takes Re Z, v_k takes (t_k/|t|) Im Z.
            const double zr = re * c + im * sn;
            const double zi = im * c - re * sn;
            acc[0] += wsig[s] * zr;
            for (int k = 0; k < n; ++k) acc[k + 1] += wsig[s] * sig[s * n + k] * zi;
        }
        for (int k = 0; k <= n; ++k) terms[k][i] = damp * acc[k];
    });
    for (int k = 0; k <= n; ++k) out[k] = quad::pairwise_sum(terms[k]);
    return out;
}

double poisson_extend_halfspace(const BoundarySpec& f, std::span<const double> x, double y, Route route) {
    check_height(y);
    const GaussianFamily& g = as_gaussian(f);
    if (route == Route::fourier) return halfspace_fourier_values(g, x, y)[0];
    return halfspace_jet(g, x, y).u;
}

double riesz_conjugate(const BoundarySpec& f, std::span<const double> x, double y, int k, Route route) {
    check_height(y);
    const GaussianFamily& g = as_gaussian(f);
    if (k < 1 || k > g.n) throw std::invalid_argument("Riesz index must lie in 1..n");
    if (route == Route::fourier) return halfspace_fourier_values(g, x, y)[k];
    return halfspace_jet(g, x, y).v[k - 1];
}

Multivector monogenic_extension_halfspace(const BoundarySpec& f, std::span<const double> x, double y) {
    check_height(y);
    const GaussianFamily& g = as_gaussian(f);
    const HalfSpaceJet jet = halfspace_jet(g, x, y);
    Multivector F = Multivector::scalar(g.n, jet.u);
    for (int k = 1; k <= g.n; ++k) F[1u << (k - 1)] = jet.v[k - 1];
    return F;
}

ParavectorField halfspace_extension_field(const GaussianFamily& f) {
    ParavectorField F;
    F.id = "halfspace_extension";
    F.algebra = FieldAlgebra::clifford;
    F.domain = FieldDomain::halfspace;
    F.dimension = f.n + 1;
    F.generators = f.n;
    auto g = std::make_shared<GaussianFamily>(std::get<GaussianFamily>(validate(f)));
    F.value = [g](std::span<const double> p) { return monogenic_extension_halfspace(*g, p.subspan(1), p[0]); };
    F.d0 = [g](std::span<const double> p) {
        const HalfSpaceJet jet = halfspace_jet(*g, p.subspan(1), p[0]);
        // d/dy v_k = -d/dx_k u by the same kernel identity.
        Multivector d = Multivector::scalar(g->n, jet.du_dy);
        for (int k = 1; k <= g->n; ++k) d[1u << (k - 1)] = -jet.du_dx[k - 1];
        return d;
    };
    return F;
}

ParavectorField disk_holomorphic_field(const CircleFourier& f) {
    auto coeff = std::make_shared<std::vector<std::complex<double>>>(f.max_degree() + 1, 0.0);
    (*coeff)[0] = f.a0;
    for (const auto& t : f.terms) (*coeff)[t.k] += std::complex<double>(t.a, -t.b);
    ParavectorField F;
    F.id = "disk_holomorphic";
    F.domain = FieldDomain::ball;
    F.dimension = 2;
    F.generators = 1;
    auto to_mv = [](std::complex<double> z) {
        Multivector m(1);
        m[0] = z.real();
        m[1] = z.imag();
        return m;
    };
    F.value = [coeff, to_mv](std::span<const double> p) { return to_mv(holomorphic_value(*coeff, {p[0], p[1]})); };
    F.d0 = [coeff, to_mv](std::span<const double> p) {
        return to_mv(holomorphic_derivative(*coeff, {p[0], p[1]}));
    };
    return F;
}

std::vector<std::string> catalog_ids() {
    return {"ball3_k1", "ball3_k2", "quat_k1", "quat_k2", "halfspace_cauchy(y0[,n])"};
}

ParavectorField catalog_monogenic(const std::string& id) {
    ParavectorField F;
    F.id = id;
    if (id == "ball3_k1") {
        F.dimension = 3;
        F.generators = 2;
        F.value = [](std::span<const double> p) {
            Multivector m(2);
            m[0] = p[1];
            m[1] = -p[0];
            return m;
        };
        F.d0 = [](std::span<const double>) { return Multivector::blade(2, 1, -1.0); };
        return F;
    }
    if (id == "ball3_k2") {
        F.dimension = 3;
        F.generators = 2;
        F.value = [](std::span<const double> p) {
            Multivector m(2);
            m[0] = p[1] * p[1] + p[2] * p[2] - 2.0 * p[0] * p[0];
            m[1] = -2.0 * p[0] * p[1];
            m[2] = -2.0 * p[0] * p[2];
            return m;
        };
        F.d0 = [](std::span<const double> p) {
            Multivector m(2);
            m[0] = -4.0 * p[0];
            m[1] = -2.0 * p[1];
            m[2] = -2.0 * p[2];
            return m;
        };
        return F;
    }
    if (id == "quat_k1" || id == "quat_k2") {
        F.algebra = FieldAlgebra::quaternion;
        F.dimension = 4;
        F.generators = 2;
        if (id == "quat_k1") {
            F.value = [](std::span<const double> p) { return to_multivector({p[1], -p[0], 0.0, 0.0}); };
            F.d0 = [](std::span<const double>) { return to_multivector({0.0, -1.0, 0.0, 0.0}); };
        } else {
            F.value = [](std::span<const double> p) {
                return to_multivector({p[1] * p[1] + p[2] * p[2] + p[3] * p[3] - 3.0 * p[0] * p[0],
                                       -2.0 * p[0] * p[1], -2.0 * p[0] * p[2], -2.0 * p[0] * p[3]});
            };
            F.d0 = [](std::span<const double> p) {
                return to_multivector({-6.0 * p[0], -2.0 * p[1], -2.0 * p[2], -2.0 * p[3]});
            };
        }
        return F;
    }
    const std::string prefix = "halfspace_cauchy(";
    if (id.rfind(prefix, 0) == 0 && id.back() == ')') {
        std::string args = id.substr(prefix.size(), id.size() - prefix.size() - 1);
        std::replace(args.begin(), args.end(), ',', ' ');
        std::istringstream in(args);
        double y0 = 0.0;
        int n = 2;
        if (!(in >> y0) || !(y0 > 0.0)) throw std::invalid_argument("halfspace_cauchy needs a positive pole depth");
        if (!(in >> n)) n = 2;
        if (n < 1 || n > 3) throw std::invalid_argument("halfspace_cauchy supports n = 1, 2, 3");
        F.domain = FieldDomain::halfspace;
        F.dimension = n + 1;
        F.generators = n;
        // E(z) = conj(z) / |z|^{n+1} with z = x - p, p = (-y0, 0, ..., 0).
        F.value = [n, y0](std::span<const double> p) {
            Multivector m(n);
            double r2 = (p[0] + y0) * (p[0] + y0);
            for (int k = 1; k <= n; ++k) r2 += p[k] * p[k];
            const double s = std::pow(r2, -0.5 * (n + 1));
            m[0] = (p[0] + y0) * s;
            for (int k = 1; k <= n; ++k) m[1u << (k - 1)] = -p[k] * s;
            return m;
        };
        F.d0 = [n, y0](std::span<const double> p) {
            Multivector m(n);
            const double z0 = p[0] + y0;
            double r2 = z0 * z0;
            for (int k = 1; k <= n; ++k) r2 += p[k] * p[k];
            const double s = std::pow(r2, -0.5 * (n + 1));
            const double t = (n + 1) * z0 * s / r2;
            m[0] = s - t * z0;
            for (int k = 1; k <= n; ++k) m[1u << (k - 1)] = t * p[k];
            return m;
        };
        return F;
    }
    std::string list;
    for (const auto& c : catalog_ids()) list += (list.empty() ? "" : ", ") + c;
    throw std::invalid_argument("unknown catalog field '" + id + "' (catalog: " + list + ")");
}

namespace {

void check_stencil(const ParavectorField& F, std::span<const double> point, double h) {
    if (static_cast<int>(point.size()) != F.dimension) throw std::invalid_argument("point dimension mismatch");
    if (!(h > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
    if (F.domain == FieldDomain::ball && !(std::sqrt(norm2(point)) + h < 1.0)) {
        throw std::domain_error("finite-difference stencil leaves the ball");
    }
    if (F.domain == FieldDomain::halfspace && !(point[0] - h > 0.0)) {
        throw std::domain_error("finite-difference stencil leaves the half-space");
    }
}

Multivector partial_fd(const ParavectorField& F, std::span<const double> point, int k, double h) {
    std::vector<double> p(point.begin(), point.end());
    p[k] = point[k] + h;
    Multivector plus = F.value(p);
    p[k] = point[k] - h;
    Multivector minus = F.value(p);
    return (plus - minus) * (0.5 / h);
}

}  // namespace

double dirac_residual(const ParavectorField& F, std::span<const double> point, double h) {
    check_stencil(F, point, h);
    Multivector sum = partial_fd(F, point, 0, h);
    for (int k = 1; k < F.dimension; ++k) sum += F.unit(k) * partial_fd(F, point, k, h);
    return 0.5 * mv_norm(sum);
}

Multivector conj_dirac_fd(const ParavectorField& F, std::span<const double> point, double h) {
    check_stencil(F, point, h);
    Multivector sum = partial_fd(F, point, 0, h);
    for (int k = 1; k < F.dimension; ++k) sum -= F.unit(k) * partial_fd(F, point, k, h);
    return sum * 0.5;
}

Multivector d0_field(const ParavectorField& F, std::span<const double> point) {
    if (F.d0) return F.d0(point);
    return partial_fd(F, point, 0, 1e-4);
}

}  // namespace dirichlet
