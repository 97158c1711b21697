#include "dirichlet/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

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

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

void CircleFourier::dense(std::vector<double>& a, std::vector<double>& b) const {
    const int K = max_degree();
    a.assign(K + 1, 0.0);
    b.assign(K + 1, 0.0);
    a[0] = a0;
    for (const auto& t : terms) {
        a[t.k] += t.a;
        b[t.k] += t.b;
    }
}

int CircleFourier::max_degree() const {
    int K = 0;
    for (const auto& t : terms) K = std::max(K, t.k);
    return K;
}

BoundarySpec validate(const BoundarySpec& spec) {
    return std::visit(
        Overloaded{
            [](const CircleFourier& c) -> BoundarySpec {
                if (!std::isfinite(c.a0)) throw std::invalid_argument("non-finite Fourier coefficient");
                for (const auto& t : c.terms) {
                    if (t.k < 1) throw std::invalid_argument("Fourier degrees must be >= 1 (a0 holds degree 0)");
                    if (t.k > kMaxBandLimit) throw std::invalid_argument("Fourier degree exceeds band limit 64");
                    if (!std::isfinite(t.a) || !std::isfinite(t.b)) {
                        throw std::invalid_argument("non-finite Fourier coefficient");
                    }
                }
                return c;
            },
            [](const ZonalGegenbauer& z) -> BoundarySpec {
                if (z.n < 2 || z.n > 4) throw std::invalid_argument("zonal data live on S^1, S^2 or S^3");
                if (z.gamma.empty()) throw std::invalid_argument("zonal spec needs at least one coefficient");
                if (z.max_degree() > kMaxBandLimit) throw std::invalid_argument("zonal degree exceeds band limit 64");
                for (double g : z.gamma) {
                    if (!std::isfinite(g)) throw std::invalid_argument("non-finite zonal coefficient");
                }
                ZonalGegenbauer out = z;
                if (out.pole.empty()) {
                    out.pole.assign(z.n, 0.0);
                    out.pole[0] = 1.0;
                }
                if (static_cast<int>(out.pole.size()) != z.n) {
                    throw std::invalid_argument("pole axis must have n components");
                }
                const double norm = std::sqrt(dot(out.pole, out.pole));
                if (!(norm > 0.0) || !std::isfinite(norm)) throw std::invalid_argument("pole axis must be nonzero");
                for (double& p : out.pole) p /= norm;
                return out;
            },
            [](const GaussianFamily& g) -> BoundarySpec {
                if (g.n < 1 || g.n > 3) throw std::invalid_argument("Gaussian families live on R^1, R^2 or R^3");
                GaussianFamily out = g;
                for (auto& t : out.terms) {
                    if (t.center.empty()) t.center.assign(g.n, 0.0);
                    if (static_cast<int>(t.center.size()) != g.n) {
                        throw std::invalid_argument("Gaussian center must have n components");
                    }
                    if (t.frequency.empty()) t.frequency.assign(g.n, 0.0);
                    if (static_cast<int>(t.frequency.size()) != g.n) {
                        throw std::invalid_argument("Gaussian frequency must have n components");
                    }
                    if (!(t.width > 0.0) || !std::isfinite(t.width)) {
                        throw std::invalid_argument("Gaussian width must be positive");
                    }
                    if (!std::isfinite(t.amplitude)) throw std::invalid_argument("non-finite Gaussian amplitude");
                }
                return out;
            },
            [](const SampledGrid& s) -> BoundarySpec {
                if (s.domain != "circle") {
                    throw std::invalid_argument("sampled boundary data are supported on the circle only");
                }
                if (s.samples.size() < 4) throw std::invalid_argument("sampled grid needs at least 4 samples");
                for (double v : s.samples) {
                    if (!std::isfinite(v)) throw std::invalid_argument("non-finite sample");
                }
                return s;
            },
        },
        spec);
}

double evaluate_boundary(const BoundarySpec& spec, std::span<const double> point) {
    return std::visit(
        Overloaded{
            [&](const CircleFourier& c) {
                if (point.size() != 2) throw std::invalid_argument("circle points have 2 coordinates");
                const double th = std::atan2(point[1], point[0]);
                double s = c.a0;
                for (const auto& t : c.terms) s += t.a * std::cos(t.k * th) + t.b * std::sin(t.k * th);
                return s;
            },
            [&](const ZonalGegenbauer& raw) {
                if (static_cast<int>(point.size()) != raw.n) throw std::invalid_argument("sphere point dimension mismatch");
                const ZonalGegenbauer z =
                    raw.pole.size() == static_cast<std::size_t>(raw.n) ? raw : std::get<ZonalGegenbauer>(validate(raw));
                const double norm = std::sqrt(dot(point, point));
                const double t = std::clamp(dot(point, z.pole) / norm, -1.0, 1.0);
                special::GegenbauerTable table(z.n, z.max_degree());
                return table.series(z.gamma, t);
            },
            [&](const GaussianFamily& g) {
                if (static_cast<int>(point.size()) != g.n) throw std::invalid_argument("point dimension mismatch");
                double s = 0.0;
                for (const auto& t : g.terms) {
                    double d2 = 0.0, phase = 0.0;
                    for (int k = 0; k < g.n; ++k) {
                        const double d = point[k] - (t.center.empty() ? 0.0 : t.center[k]);
                        d2 += d * d;
                        if (!t.frequency.empty()) phase += t.frequency[k] * point[k];
                    }
                    s += t.amplitude * std::exp(-kPi * d2 / (t.width * t.width)) * std::cos(2.0 * kPi * phase);
                }
                return s;
            },
            [&](const SampledGrid& s) {
                return evaluate_boundary(BoundarySpec{to_circle_fourier(s)}, point);
            },
        },
        spec);
}

BoundarySpec scaled(const BoundarySpec& spec, double c) {
    return std::visit(
        Overloaded{
            [c](CircleFourier f) -> BoundarySpec {
                f.a0 *= c;
                for (auto& t : f.terms) t.a *= c, t.b *= c;
                return f;
            },
            [c](ZonalGegenbauer z) -> BoundarySpec {
                for (double& g : z.gamma) g *= c;
                return z;
            },
            [c](GaussianFamily g) -> BoundarySpec {
                for (auto& t : g.terms) t.amplitude *= c;
                return g;
            },
            [c](SampledGrid s) -> BoundarySpec {
                for (double& v : s.samples) v *= c;
                return s;
            },
        },
        spec);
}

GaussianFamily translated(const GaussianFamily& g, std::span<const double> shift) {
    if (static_cast<int>(shift.size()) != g.n) throw std::invalid_argument("shift dimension mismatch");
    GaussianFamily out = g;
    for (auto& t : out.terms) {
        if (t.center.empty()) t.center.assign(g.n, 0.0);
        for (int k = 0; k < g.n; ++k) t.center[k] += shift[k];
    }
    return out;
}

ZonalGegenbauer with_pole(const ZonalGegenbauer& z, std::span<const double> pole) {
    ZonalGegenbauer out = z;
    out.pole.assign(pole.begin(), pole.end());
    return std::get<ZonalGegenbauer>(validate(out));
}

CircleFourier to_circle_fourier(const SampledGrid& grid, double* aliasing) {
    const std::size_t N = grid.samples.size();
    if (N < 4) throw std::invalid_argument("sampled grid needs at least 4 samples");
    const int K = std::min<int>(static_cast<int>((N - 1) / 2), kMaxBandLimit);
    CircleFourier out;
    double top = 0.0;
    for (int k = 0; k <= K; ++k) {
        double a = 0.0, b = 0.0;
        for (std::size_t j = 0; j < N; ++j) {
            const double th = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(N);
            a += grid.samples[j] * std::cos(k * th);
            b += grid.samples[j] * std::sin(k * th);
        }
        if (k == 0) {
            out.a0 = a / static_cast<double>(N);
        } else {
            a *= 2.0 / static_cast<double>(N);
            b *= 2.0 / static_cast<double>(N);
            if (a != 0.0 || b != 0.0) out.terms.push_back({k, a, b});
            if (k >= K - 1) top = std::max(top, std::hypot(a, b));
        }
    }
    if (aliasing) *aliasing = top;
    return out;
}

void gaussian_fourier(const GaussianFamily& g, std::span<const double> t, double& re, double& im) {
    re = 0.0;
    im = 0.0;
    for (const auto& term : g.terms) {
        const double wn = std::pow(term.width, g.n);
        for (int sign : {1, -1}) {
            double s2 = 0.0, phase = 0.0;
            for (int k = 0; k < g.n; ++k) {
                const double a = term.frequency.empty() ? 0.0 : term.frequency[k];
                const double tk = t[k] + sign * a;
                s2 += tk * tk;
                phase += (term.center.empty() ? 0.0 : term.center[k]) * tk;
            }
            const double mag = 0.5 * term.amplitude * wn * std::exp(-kPi * term.width * term.width * s2);
            re += mag * std::cos(2.0 * kPi * phase);
            im += mag * std::sin(2.0 * kPi * phase);
        }
    }
}

double gaussian_l2_squared(const GaussianFamily& family) {
    const GaussianFamily g = std::get<GaussianFamily>(validate(family));
    // Pairwise closed forms: product of two Gaussians is a Gaussian, the
    // cosine products split into two plane waves.
    double total = 0.0;
    for (const auto& p : g.terms) {
        for (const auto& q : g.terms) {
            const double ap = 1.0 / (p.width * p.width);
            const double aq = 1.0 / (q.width * q.width);
            const double s = ap + aq;
            double dc2 = 0.0;
            std::vector<double> mid(g.n);
            for (int k = 0; k < g.n; ++k) {
                const double d = p.center[k] - q.center[k];
                dc2 += d * d;
                mid[k] = (ap * p.center[k] + aq * q.center[k]) / s;
            }
            const double base = p.amplitude * q.amplitude * std::exp(-kPi * ap * aq / s * dc2) * std::pow(s, -0.5 * g.n);
            double waves = 0.0;
            for (int sign : {1, -1}) {
                double b2 = 0.0, phase = 0.0;
                for (int k = 0; k < g.n; ++k) {
                    const double fp = p.frequency.empty() ? 0.0 : p.frequency[k];
                    const double fq = q.frequency.empty() ? 0.0 : q.frequency[k];
                    const double b = fp + sign * fq;
                    b2 += b * b;
                    phase += b * mid[k];
                }
                waves += 0.5 * std::exp(-kPi * b2 / s) * std::cos(2.0 * kPi * phase);
            }
            total += base * waves;
        }
    }
    return total;
}

void gaussian_extent(const GaussianFamily& family, std::vector<double>& centroid, double& max_width,
                     double& min_width) {
    const GaussianFamily g = std::get<GaussianFamily>(validate(family));
    centroid.assign(g.n, 0.0);
    max_width = 0.0;
    min_width = 0.0;
    if (g.terms.empty()) {
        max_width = min_width = 1.0;
        return;
    }
    min_width = g.terms.front().width;
    double weight = 0.0;
    for (const auto& t : g.terms) {
        const double a = std::abs(t.amplitude) + 1e-300;
        for (int k = 0; k < g.n; ++k) centroid[k] += a * t.center[k];
        weight += a;
        max_width = std::max(max_width, t.width);
        min_width = std::min(min_width, t.width);
    }
    for (double& c : centroid) c /= weight;
}

}  // namespace dirichlet
