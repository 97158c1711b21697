#include "dirichlet/quadrature.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "dirichlet/special_functions.hpp"

namespace dirichlet::quad {

namespace {

constexpr double kPi = std::numbers::pi;

std::atomic<int> g_workers{0};
thread_local bool t_in_parallel = false;

int default_workers() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(std::min(hw, 64u));
}

GaussRule compute_gauss_legendre(int m) {
    GaussRule rule;
    rule.x.resize(m);
    rule.w.resize(m);
    for (int i = 0; i < (m + 1) / 2; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (m + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= m; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = m * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= m; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = m * (x * p1 - p0) / (x * x - 1.0);
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.x[i] = -x;
        rule.x[m - 1 - i] = x;
        rule.w[i] = w;
        rule.w[m - 1 - i] = w;
    }
    if (m % 2 == 1) rule.x[m / 2] = 0.0;
    return rule;
}

void check_finite(double value, std::span<const double> node, std::size_t index) {
    if (std::isfinite(value)) return;
    std::ostringstream msg;
    msg << "non-finite integrand at node " << index << " (";
    for (std::size_t k = 0; k < node.size(); ++k) msg << (k ? ", " : "") << node[k];
    msg << ")";
    throw std::domain_error(msg.str());
}

// Orthonormal basis of the tangent space of S^{n-1} at p.
std::vector<std::array<double, 4>> tangent_frame(std::span<const double> p) {
    const int n = static_cast<int>(p.size());
    std::vector<std::array<double, 4>> basis;
    std::array<double, 4> v0{};
    for (int k = 0; k < n; ++k) v0[k] = p[k];
    std::vector<std::array<double, 4>> accepted{v0};
    // Try coordinate axes in order of least alignment with p.
    std::vector<int> order(n);
    for (int k = 0; k < n; ++k) order[k] = k;
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return std::abs(p[a]) < std::abs(p[b]); });
    for (int axis : order) {
        if (static_cast<int>(basis.size()) == n - 1) break;
        std::array<double, 4> v{};
        v[axis] = 1.0;
        for (const auto& u : accepted) {
            double d = 0.0;
            for (int k = 0; k < n; ++k) d += v[k] * u[k];
            for (int k = 0; k < n; ++k) v[k] -= d * u[k];
        }
        double norm = 0.0;
        for (int k = 0; k < n; ++k) norm += v[k] * v[k];
        norm = std::sqrt(norm);
        if (norm < 1e-6) continue;
        for (int k = 0; k < n; ++k) v[k] /= norm;
        accepted.push_back(v);
        basis.push_back(v);
    }
    return basis;
}

// Radial nodes on (0, inf) or (0, upper] split at the exclusion radii.
// bucket[j] = index of the largest schedule radius below the node.
struct RadialNodes {
    std::vector<double> x;
    std::vector<double> w;
    std::vector<int> bucket;
};

int bucket_of(double x, std::span<const double> radii) {
    // radii decreasing; first index with radii[i] < x.
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (radii[i] < x) return static_cast<int>(i);
    }
    return static_cast<int>(radii.size());
}

void add_panel(RadialNodes& out, double a, double b, int m, std::span<const double> radii) {
    append_gauss(m, a, b, out.x, out.w);
    out.bucket.resize(out.x.size(), bucket_of(0.5 * (a + b), radii));
}

// Splits [a, b] into pieces: geometric when b > 2a, otherwise at most
// `max_width` wide.
void add_graded(RadialNodes& out, double a, double b, double max_width, int m, std::span<const double> radii) {
    while (b > 2.0 * a && a < max_width) {
        add_panel(out, a, 2.0 * a, m, radii);
        a *= 2.0;
    }
    const int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / max_width - 1e-9)));
    for (int p = 0; p < pieces; ++p) {
        add_panel(out, a + (b - a) * p / pieces, a + (b - a) * (p + 1) / pieces, m, radii);
    }
}

std::vector<double> accumulate_buckets(std::span<const double> bucket_sums, std::size_t count) {
    std::vector<double> out(count, 0.0);
    double running = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        running += bucket_sums[i];
        out[i] = running;
    }
    return out;
}

std::vector<double> reduce_columns(const std::vector<std::vector<double>>& rows, std::size_t columns) {
    std::vector<double> out(columns);
    std::vector<double> column(rows.size());
    for (std::size_t c = 0; c < columns; ++c) {
        for (std::size_t r = 0; r < rows.size(); ++r) column[r] = rows[r][c];
        out[c] = pairwise_sum(column);
    }
    return out;
}

int panel_nodes(int level) { return 6 + 2 * std::max(1, level); }

}  // namespace

int worker_count() {
    const int w = g_workers.load();
    return w > 0 ? w : default_workers();
}

void set_worker_count(int workers) { g_workers.store(std::max(0, workers)); }

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
    // Nested loops run serially on the calling worker.
    const std::size_t threads = t_in_parallel ? 1 : std::min<std::size_t>(worker_count(), count);
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    auto worker = [&] {
        const bool was_parallel = t_in_parallel;
        t_in_parallel = true;
        struct Restore {
            bool value;
            ~Restore() { t_in_parallel = value; }
        } restore{was_parallel};
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count || failed.load()) return;
            try {
                body(i);
            } catch (...) {
                errors[i] = std::current_exception();
                failed.store(true);
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads - 1);
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

double pairwise_sum(std::span<const double> values) {
    if (values.size() <= 8) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

const GaussRule& gauss_legendre(int m) {
    if (m < 1) throw std::invalid_argument("Gauss-Legendre rule needs at least one node");
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<GaussRule>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[m];
    if (!slot) slot = std::make_unique<GaussRule>(compute_gauss_legendre(m));
    return *slot;
}

void append_gauss(int m, double a, double b, std::vector<double>& x, std::vector<double>& w) {
    const GaussRule& g = gauss_legendre(m);
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    for (int i = 0; i < m; ++i) {
        x.push_back(mid + half * g.x[i]);
        w.push_back(half * g.w[i]);
    }
}

QuadratureRule sphere_rule(int n, int level) {
    if (level < 1) throw std::invalid_argument("quadrature level must be >= 1");
    QuadratureRule rule;
    rule.level = level;
    rule.dim = n;
    const int az = 2 * level;
    const double daz = 2.0 * kPi / az;
    switch (n) {
    case 2:
        rule.kind = DomainKind::circle;
        for (int j = 0; j < az; ++j) {
            const double th = j * daz;
            rule.nodes.push_back(std::cos(th));
            rule.nodes.push_back(std::sin(th));
            rule.weights.push_back(daz);
        }
        return rule;
    case 3: {
        rule.kind = DomainKind::sphere2;
        const GaussRule& g = gauss_legendre(level);
        for (int i = 0; i < level; ++i) {
            const double t = g.x[i];
            const double s = std::sqrt(std::max(0.0, 1.0 - t * t));
            for (int j = 0; j < az; ++j) {
                const double ph = j * daz;
                rule.nodes.insert(rule.nodes.end(), {t, s * std::cos(ph), s * std::sin(ph)});
                rule.weights.push_back(g.w[i] * daz);
            }
        }
        return rule;
    }
    case 4: {
        rule.kind = DomainKind::sphere3;
        // Gauss-Chebyshev of the second kind carries the sqrt(1 - t^2) Jacobian.
        const QuadratureRule fiber = sphere_rule(3, level);
        for (int i = 1; i <= level; ++i) {
            const double angle = i * kPi / (level + 1);
            const double t = std::cos(angle);
            const double s = std::sin(angle);
            const double wt = kPi / (level + 1) * s * s;
            for (std::size_t j = 0; j < fiber.size(); ++j) {
                const auto f = fiber.node(j);
                rule.nodes.insert(rule.nodes.end(), {t, s * f[0], s * f[1], s * f[2]});
                rule.weights.push_back(wt * fiber.weights[j]);
            }
        }
        return rule;
    }
    default:
        throw std::invalid_argument("sphere rules exist for S^1, S^2 and S^3 only (n = " + std::to_string(n) + ")");
    }
}

namespace {

QuadratureRule tensor_rule(DomainKind kind, int level, const std::vector<std::vector<double>>& axis_x,
                           const std::vector<std::vector<double>>& axis_w) {
    QuadratureRule rule;
    rule.kind = kind;
    rule.level = level;
    rule.dim = static_cast<int>(axis_x.size());
    std::size_t total = 1;
    for (const auto& a : axis_x) total *= a.size();
    rule.nodes.reserve(total * rule.dim);
    rule.weights.reserve(total);
    std::vector<std::size_t> idx(rule.dim, 0);
    for (std::size_t p = 0; p < total; ++p) {
        double w = 1.0;
        for (int d = 0; d < rule.dim; ++d) {
            rule.nodes.push_back(axis_x[d][idx[d]]);
            w *= axis_w[d][idx[d]];
        }
        rule.weights.push_back(w);
        for (int d = rule.dim - 1; d >= 0; --d) {
            if (++idx[d] < axis_x[d].size()) break;
            idx[d] = 0;
        }
    }
    return rule;
}

}  // namespace

QuadratureRule box_rule(int n, double half_width, int level) {
    if (n < 1 || n > 4) throw std::invalid_argument("box rules support 1 to 4 dimensions");
    if (level < 1) throw std::invalid_argument("quadrature level must be >= 1");
    if (!(half_width > 0.0)) throw std::invalid_argument("box half-width must be positive");
    std::vector<double> x, w;
    const int panels = 2 * level;
    for (int p = 0; p < panels; ++p) {
        append_gauss(8, -half_width + 2.0 * half_width * p / panels, -half_width + 2.0 * half_width * (p + 1) / panels,
                     x, w);
    }
    return tensor_rule(DomainKind::box, level, std::vector(n, x), std::vector(n, w));
}

QuadratureRule line_rule(std::span<const double> center, double scale, int level) {
    const int n = static_cast<int>(center.size());
    if (n < 1 || n > 4) throw std::invalid_argument("line rules support 1 to 4 dimensions");
    if (level < 1) throw std::invalid_argument("quadrature level must be >= 1");
    if (!(scale > 0.0)) throw std::invalid_argument("line rule scale must be positive");
    const GaussRule& g = gauss_legendre(16 * level);
    std::vector<std::vector<double>> ax(n), aw(n);
    for (int d = 0; d < n; ++d) {
        for (std::size_t i = 0; i < g.x.size(); ++i) {
            const double phi = 0.5 * kPi * g.x[i];
            const double c = std::cos(phi);
            ax[d].push_back(center[d] + scale * std::tan(phi));
            aw[d].push_back(0.5 * kPi * g.w[i] * scale / (c * c));
        }
    }
    return tensor_rule(DomainKind::line, level, ax, aw);
}

double integrate(const QuadratureRule& rule, const std::function<double(std::span<const double>)>& g) {
    std::vector<double> terms(rule.size());
    parallel_for(rule.size(), [&](std::size_t i) {
        const double v = g(rule.node(i));
        check_finite(v, rule.node(i), i);
        terms[i] = rule.weights[i] * v;
    });
    return pairwise_sum(terms);
}

Multivector integrate(const QuadratureRule& rule, int generators,
                      const std::function<Multivector(std::span<const double>)>& g) {
    const std::size_t blades = std::size_t{1} << generators;
    std::vector<std::vector<double>> terms(blades, std::vector<double>(rule.size()));
    parallel_for(rule.size(), [&](std::size_t i) {
        const Multivector v = g(rule.node(i));
        if (v.generators() != generators) throw std::invalid_argument("algebra dimension mismatch");
        for (std::size_t a = 0; a < blades; ++a) {
            check_finite(v[static_cast<unsigned>(a)], rule.node(i), i);
            terms[a][i] = rule.weights[i] * v[static_cast<unsigned>(a)];
        }
    });
    Multivector out(generators);
    for (std::size_t a = 0; a < blades; ++a) out[static_cast<unsigned>(a)] = pairwise_sum(terms[a]);
    return out;
}

Estimate ray_integral(const std::function<double(double)>& h, double lambda, double cap, int level) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::domain_error("ray weight power must lie in [0, 1]");
    if (!(cap > 0.0)) throw std::invalid_argument("ray cap must be positive");
    if (level < 1) throw std::invalid_argument("quadrature level must be >= 1");
    auto evaluate = [&](int m) {
        const GaussRule& g = gauss_legendre(m);
        std::vector<double> terms(2 * m);
        parallel_for(static_cast<std::size_t>(2 * m), [&](std::size_t idx) {
            const int i = static_cast<int>(idx % m);
            const double s = 0.5 * (g.x[i] + 1.0);
            const double ws = 0.5 * g.w[i];
            double y, jac;
            if (idx < static_cast<std::size_t>(m)) {
                y = cap * s * s;
                jac = 2.0 * cap * s;
            } else {
                y = cap / s;
                jac = cap / (s * s);
            }
            const double v = h(y);
            if (!std::isfinite(v)) {
                throw std::domain_error("non-finite ray integrand at y = " + std::to_string(y));
            }
            terms[idx] = ws * jac * v * std::pow(y, lambda);
        });
        return pairwise_sum(terms);
    };
    const int m = 12 * level;
    const double fine = evaluate(m);
    const double coarse = evaluate(m / 2);
    return {fine, std::abs(fine - coarse)};
}

SingularSchedule SingularSchedule::standard() { return {{0.04, 0.02, 0.01, 0.005, 0.0025}, 4}; }

void SingularSchedule::validate() const {
    if (radii.size() < 3) throw std::invalid_argument("singular schedule needs at least three radii");
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > 0.0)) throw std::invalid_argument("exclusion radii must be positive");
        if (i > 0 && !(radii[i] < radii[i - 1])) {
            throw std::invalid_argument("exclusion radii must be strictly decreasing");
        }
    }
    if (order < 1 || order >= static_cast<int>(radii.size())) {
        throw std::invalid_argument("extrapolation order must be between 1 and (number of radii - 1)");
    }
}

SingularSchedule SingularSchedule::scaled(double factor) const {
    SingularSchedule s = *this;
    for (double& r : s.radii) r *= factor;
    return s;
}

Estimate extrapolate_to_zero(const SingularSchedule& schedule, std::span<const double> values) {
    schedule.validate();
    const std::size_t m = schedule.radii.size();
    if (values.size() != m) throw std::invalid_argument("one value per exclusion radius required");
    // I(eps) must move in one direction as eps shrinks.
    double scale = 0.0;
    for (double v : values) scale = std::max(scale, std::abs(v));
    const double slack = 1e-12 * scale;
    bool up = false, down = false;
    for (std::size_t i = 1; i < m; ++i) {
        const double d = values[i] - values[i - 1];
        if (d > slack) up = true;
        if (d < -slack) down = true;
    }
    if (up && down) throw std::runtime_error("schedule too coarse");

    auto neville = [&](std::size_t first) {
        std::vector<double> p(values.begin() + first, values.end());
        const std::size_t k = p.size();
        for (std::size_t level = 1; level < k; ++level) {
            for (std::size_t i = 0; i + level < k; ++i) {
                const double xi = schedule.radii[first + i];
                const double xj = schedule.radii[first + i + level];
                p[i] = (xi * p[i + 1] - xj * p[i]) / (xi - xj);
            }
        }
        return p[0];
    };
    const std::size_t order = static_cast<std::size_t>(schedule.order);
    const double high = neville(m - order - 1);
    const double low = neville(m - order);
    return {high, std::abs(high - low)};
}

Estimate double_sphere_singular(int n, const PairIntegrand& G, int level, const SingularSchedule& schedule) {
    schedule.validate();
    if (n < 2 || n > 4) throw std::invalid_argument("singular sphere integrals need n in {2, 3, 4}");
    const std::size_t m = schedule.radii.size();
    std::vector<double> psi_radii(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (schedule.radii[i] >= 2.0) throw std::invalid_argument("chord exclusion radius must be < 2");
        psi_radii[i] = 2.0 * std::asin(0.5 * schedule.radii[i]);
    }
    RadialNodes psi;
    const int mp = panel_nodes(level);
    for (std::size_t i = m - 1; i > 0; --i) add_panel(psi, psi_radii[i], psi_radii[i - 1], mp, psi_radii);
    add_graded(psi, psi_radii[0], kPi, 0.4, mp, psi_radii);

    // Directions tau on S^{n-2} in tangent coordinates.
    std::vector<double> tau_nodes, tau_w;
    int tau_dim = n - 1;
    if (n == 2) {
        tau_nodes = {1.0, -1.0};
        tau_w = {1.0, 1.0};
    } else {
        const QuadratureRule r = sphere_rule(n - 1, 2 * level);
        tau_nodes = r.nodes;
        tau_w = r.weights;
    }
    const std::size_t ntau = tau_w.size();

    const QuadratureRule outer = sphere_rule(n, 2 * level);
    std::vector<std::vector<double>> rows(outer.size());
    parallel_for(outer.size(), [&](std::size_t o) {
        const auto eta1 = outer.node(o);
        const auto frame = tangent_frame(eta1);
        std::vector<double> buckets(m + 1, 0.0);
        std::vector<double> eta2(n);
        for (std::size_t p = 0; p < psi.x.size(); ++p) {
            const double c = std::cos(psi.x[p]);
            const double s = std::sin(psi.x[p]);
            double acc = 0.0;
            for (std::size_t t = 0; t < ntau; ++t) {
                for (int k = 0; k < n; ++k) {
                    double tk = 0.0;
                    for (int j = 0; j < tau_dim; ++j) tk += tau_nodes[t * tau_dim + j] * frame[j][k];
                    eta2[k] = c * eta1[k] + s * tk;
                }
                const double g = G(eta1, eta2);
                check_finite(g, eta2, p);
                acc += tau_w[t] * g;
            }
            buckets[psi.bucket[p]] += psi.w[p] * std::pow(s, n - 2) * acc;
        }
        auto cumulative = accumulate_buckets(buckets, m);
        for (double& v : cumulative) v *= outer.weights[o];
        rows[o] = std::move(cumulative);
    });
    return extrapolate_to_zero(schedule, reduce_columns(rows, m));
}

Estimate double_sphere_singular_zonal(int n, const PairIntegrand& G, int level, const SingularSchedule& schedule) {
    schedule.validate();
    if (n != 3 && n != 4) throw std::invalid_argument("zonal reduction is implemented for n = 3 and n = 4");
    const std::size_t m = schedule.radii.size();
    std::vector<double> psi_radii(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (schedule.radii[i] >= 2.0) throw std::invalid_argument("chord exclusion radius must be < 2");
        psi_radii[i] = 2.0 * std::asin(0.5 * schedule.radii[i]);
    }
    const int mp = panel_nodes(level);
    RadialNodes psi;
    for (std::size_t i = m - 1; i > 0; --i) add_panel(psi, psi_radii[i], psi_radii[i - 1], mp, psi_radii);
    add_graded(psi, psi_radii[0], kPi, 0.4, mp, psi_radii);

    std::vector<double> beta, wbeta, alpha, walpha;
    for (int p = 0; p < 4; ++p) append_gauss(2 * mp, kPi * p / 4, kPi * (p + 1) / 4, beta, wbeta);
    for (int p = 0; p < 4; ++p) append_gauss(2 * mp, kPi * p / 4, kPi * (p + 1) / 4, alpha, walpha);
    const double outer_area = special::sphere_area(n - 2);
    const double inner_area = special::sphere_area(n - 3);

    std::vector<std::vector<double>> rows(beta.size());
    parallel_for(beta.size(), [&](std::size_t b) {
        const double cb = std::cos(beta[b]);
        const double sb = std::sin(beta[b]);
        std::vector<double> eta1(n, 0.0), eta2(n, 0.0);
        eta1[0] = cb;
        eta1[1] = sb;
        std::vector<double> buckets(m + 1, 0.0);
        for (std::size_t p = 0; p < psi.x.size(); ++p) {
            const double c = std::cos(psi.x[p]);
            const double s = std::sin(psi.x[p]);
            double acc = 0.0;
            for (std::size_t a = 0; a < alpha.size(); ++a) {
                const double ca = std::cos(alpha[a]);
                const double sa = std::sin(alpha[a]);
                // tau = cos(alpha) (-sin b, cos b, 0, ..) + sin(alpha) (0, 0, 1, ..)
                eta2[0] = c * cb - s * ca * sb;
                eta2[1] = c * sb + s * ca * cb;
                eta2[2] = s * sa;
                const double g = G(eta1, eta2);
                check_finite(g, eta2, p);
                acc += walpha[a] * std::pow(sa, n - 3) * g;
            }
            buckets[psi.bucket[p]] += psi.w[p] * std::pow(s, n - 2) * acc;
        }
        auto cumulative = accumulate_buckets(buckets, m);
        const double wb = wbeta[b] * outer_area * std::pow(sb, n - 2) * inner_area;
        for (double& v : cumulative) v *= wb;
        rows[b] = std::move(cumulative);
    });
    return extrapolate_to_zero(schedule, reduce_columns(rows, m));
}

Estimate double_space_singular(int n, const PairIntegrand& G, std::span<const double> center, double scale,
                               std::span<const Feature> features, int level, const SingularSchedule& schedule) {
    schedule.validate();
    if (n < 1 || n > 3) throw std::invalid_argument("half-space double integrals need boundary dimension 1 to 3");
    if (static_cast<int>(center.size()) != n) throw std::invalid_argument("center dimension mismatch");
    const SingularSchedule sched = schedule.scaled(scale);
    const std::size_t m = sched.radii.size();
    const int mp = panel_nodes(level);

    double min_radius = scale;
    for (const auto& f : features) {
        if (static_cast<int>(f.center.size()) != n) throw std::invalid_argument("feature dimension mismatch");
        min_radius = std::min(min_radius, f.radius);
    }
    const double max_width = 0.5 * min_radius;

    std::vector<double> sigma_nodes, sigma_w;
    if (n == 1) {
        sigma_nodes = {1.0, -1.0};
        sigma_w = {1.0, 1.0};
    } else {
        const QuadratureRule r = sphere_rule(n, (n == 2 ? 8 : 4) * level);
        sigma_nodes = r.nodes;
        sigma_w = r.weights;
    }
    const std::size_t nsig = sigma_w.size();

    auto q = [&](std::span<const double> t) {
        double d2 = 0.0;
        for (int k = 0; k < n; ++k) d2 += (t[k] - center[k]) * (t[k] - center[k]);
        const double b = 1.0 + d2 / (scale * scale);
        const double b2 = b * b;
        return b2 * b2;
    };

    const QuadratureRule outer = line_rule(center, scale, level);
    std::vector<std::vector<double>> rows(outer.size());
    parallel_for(outer.size(), [&](std::size_t o) {
        const auto x = outer.node(o);
        // Breakpoints: exclusion radii, then feature supports along rays from x.
        std::vector<double> cuts;
        for (const auto& f : features) {
            double d2 = 0.0;
            for (int k = 0; k < n; ++k) d2 += (f.center[k] - x[k]) * (f.center[k] - x[k]);
            const double d = std::sqrt(d2);
            if (d - f.radius > sched.radii[0]) cuts.push_back(d - f.radius);
            if (d + f.radius > sched.radii[0]) cuts.push_back(d + f.radius);
        }
        std::sort(cuts.begin(), cuts.end());
        RadialNodes rho;
        for (std::size_t i = m - 1; i > 0; --i) add_panel(rho, sched.radii[i], sched.radii[i - 1], mp, sched.radii);
        double a = sched.radii[0];
        auto inside_feature = [&](double lo, double hi) {
            for (const auto& f : features) {
                double d2 = 0.0;
                for (int k = 0; k < n; ++k) d2 += (f.center[k] - x[k]) * (f.center[k] - x[k]);
                const double d = std::sqrt(d2);
                if (hi > d - f.radius && lo < d + f.radius) return true;
            }
            return false;
        };
        for (double c : cuts) {
            if (c <= a * (1.0 + 1e-12)) continue;
            add_graded(rho, a, c, inside_feature(a, c) ? max_width : std::max(max_width, c - a), mp, sched.radii);
            a = c;
        }
        if (a < scale) {
            add_graded(rho, a, scale, max_width, mp, sched.radii);
            a = scale;
        }
        // Tail rho = a / u, u in (0, 1].
        {
            std::vector<double> u, wu;
            append_gauss(mp, 0.0, 1.0, u, wu);
            for (std::size_t i = 0; i < u.size(); ++i) {
                rho.x.push_back(a / u[i]);
                rho.w.push_back(wu[i] * a / (u[i] * u[i]));
                rho.bucket.push_back(0);
            }
        }
        const double qx = q(x);
        std::vector<double> buckets(m + 1, 0.0);
        std::vector<double> x2(n);
        for (std::size_t p = 0; p < rho.x.size(); ++p) {
            const double r = rho.x[p];
            double acc = 0.0;
            for (std::size_t s = 0; s < nsig; ++s) {
                for (int k = 0; k < n; ++k) x2[k] = x[k] + r * sigma_nodes[s * n + k];
                const double g = G(x, x2);
                if (g == 0.0) continue;
                const double q2 = q(x2);
                // chi(x, x2) + chi(x2, x) = 1 and G is symmetric, so the full
                // integral is twice the chi-weighted one.
                const double chi = 2.0 * q2 / (qx + q2);
                check_finite(g, x2, p);
                acc += sigma_w[s] * g * chi;
            }
            buckets[rho.bucket[p]] += rho.w[p] * std::pow(r, n - 1) * acc;
        }
        auto cumulative = accumulate_buckets(buckets, m);
        for (double& v : cumulative) v *= outer.weights[o];
        rows[o] = std::move(cumulative);
    });
    return extrapolate_to_zero(sched, reduce_columns(rows, m));
}

}  // namespace dirichlet::quad
