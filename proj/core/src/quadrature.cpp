#include "tzl/quadrature.hpp"

#include "tzl/error.hpp"
#include "tzl/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <queue>

namespace tzl {

namespace {

GaussLegendreRule build_gauss_legendre(int n) {
    GaussLegendreRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Chebyshev-like initial guess for the i-th largest root.
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p0 = 1.0;
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // Refresh the derivative at the converged root.
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

// Integrand in the working variable u over a finite interval.
struct Mapped {
    const Integrand& f;
    Domain domain;
    int* evaluations;

    double operator()(double u) const {
        ++*evaluations;
        if (domain == Domain::interval) return f(u);
        if (u >= 1.0) return 0.0;
        const double one_minus = 1.0 - u;
        const double t = u / one_minus;
        const double v = f(t);
        if (v == 0.0) return 0.0;
        return v / (one_minus * one_minus);
    }
};

double gauss_panel(const Mapped& g, double a, double b, const GaussLegendreRule& rule) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    KahanSum acc;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        acc.add(rule.weights[i] * g(mid + half * rule.nodes[i]));
    return half * acc.value();
}

struct Panel {
    double a, b, value, error;
    int depth;
    bool operator<(const Panel& o) const { return error < o.error; }
};

// Estimate on [a, b]: refined value (two halves) and its error against the
// coarse single-panel value.
Panel estimate_panel(const Mapped& g, double a, double b, int depth,
                     const rule::CompositeAdaptive& cfg, const GaussLegendreRule* gl) {
    const double mid = 0.5 * (a + b);
    if (cfg.panel == PanelRule::gauss_legendre) {
        const double whole = gauss_panel(g, a, b, *gl);
        const double halves = gauss_panel(g, a, mid, *gl) + gauss_panel(g, mid, b, *gl);
        return {a, b, halves, std::abs(halves - whole), depth};
    }
    const double fa = g(a), fm = g(mid), fb = g(b);
    const double fl = g(0.5 * (a + mid)), fr = g(0.5 * (mid + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double halves = (mid - a) / 6.0 * (fa + 4.0 * fl + fm) + (b - mid) / 6.0 * (fm + 4.0 * fr + fb);
    // Richardson-extrapolated Simpson; error from the unextrapolated difference.
    return {a, b, halves + (halves - whole) / 15.0, std::abs(halves - whole) / 15.0, depth};
}

std::vector<double> working_edges(const QuadratureSpec& spec) {
    std::vector<double> edges;
    if (spec.domain == Domain::interval) {
        require(spec.upper >= spec.lower, "integrate: upper bound below lower bound");
        edges.push_back(spec.lower);
        for (double t : spec.breakpoints)
            if (t > spec.lower && t < spec.upper) edges.push_back(t);
        edges.push_back(spec.upper);
    } else {
        edges.push_back(0.0);
        for (double t : spec.breakpoints)
            if (t > 0.0 && std::isfinite(t)) edges.push_back(t / (1.0 + t));
        edges.push_back(1.0);
    }
    require(std::is_sorted(edges.begin(), edges.end()), "integrate: breakpoints must be sorted");
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return edges;
}

QuadratureResult run_fixed(const Mapped& g, const std::vector<double>& edges,
                           const rule::GaussLegendre& cfg) {
    require(cfg.n >= 2, "integrate: Gauss-Legendre order must be at least 2");
    const auto& fine = gauss_legendre_rule(cfg.n);
    const auto& coarse = gauss_legendre_rule(std::max(1, cfg.n / 2));
    KahanSum value;
    double err = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double q = gauss_panel(g, edges[i], edges[i + 1], fine);
        value.add(q);
        err += std::abs(q - gauss_panel(g, edges[i], edges[i + 1], coarse));
    }
    return {value.value(), err, true, 0};
}

QuadratureResult run_adaptive(const Mapped& g, const std::vector<double>& edges,
                              const rule::CompositeAdaptive& cfg) {
    require(cfg.abs_tol > 0.0 || cfg.rel_tol > 0.0, "integrate: tolerance must be positive");
    const GaussLegendreRule* gl =
        cfg.panel == PanelRule::gauss_legendre ? &gauss_legendre_rule(cfg.panel_order) : nullptr;

    std::priority_queue<Panel> heap;
    std::vector<Panel> finished;  // panels at max depth
    double total_err = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        if (edges[i + 1] > edges[i]) {
            Panel p = estimate_panel(g, edges[i], edges[i + 1], 0, cfg, gl);
            total_err += p.error;
            heap.push(p);
        }
    }

    auto current_value = [&] {
        std::vector<double> parts;
        auto copy = heap;
        while (!copy.empty()) {
            parts.push_back(copy.top().value);
            copy.pop();
        }
        for (const auto& p : finished) parts.push_back(p.value);
        std::sort(parts.begin(), parts.end());
        return pairwise_sum(parts);
    };

    double value = current_value();
    int panels = static_cast<int>(heap.size());
    bool converged = true;
    // Running sums drift; recompute from scratch every so often.
    int since_refresh = 0;
    while (!heap.empty()) {
        const double target = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(value));
        if (total_err <= target) break;
        if (panels >= cfg.max_panels) {
            converged = false;
            break;
        }
        Panel worst = heap.top();
        heap.pop();
        if (worst.depth >= cfg.max_depth) {
            finished.push_back(worst);
            if (heap.empty()) {
                converged = false;
                break;
            }
            continue;
        }
        const double mid = 0.5 * (worst.a + worst.b);
        Panel left = estimate_panel(g, worst.a, mid, worst.depth + 1, cfg, gl);
        Panel right = estimate_panel(g, mid, worst.b, worst.depth + 1, cfg, gl);
        total_err += left.error + right.error - worst.error;
        value += left.value + right.value - worst.value;
        heap.push(left);
        heap.push(right);
        ++panels;
        if (++since_refresh == 64) {
            since_refresh = 0;
            value = current_value();
            double e = 0.0;
            auto copy = heap;
            while (!copy.empty()) {
                e += copy.top().error;
                copy.pop();
            }
            for (const auto& p : finished) e += p.error;
            total_err = e;
        }
    }
    value = current_value();
    double err = 0.0;
    while (!heap.empty()) {
        err += heap.top().error;
        heap.pop();
    }
    for (const auto& p : finished) err += p.error;
    const double target = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(value));
    if (err > target) converged = false;
    return {value, err, converged, 0};
}

} // namespace

const GaussLegendreRule& gauss_legendre_rule(int n) {
    require(n >= 1 && n <= 1024, "gauss_legendre_rule: order must lie in [1, 1024]");
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<GaussLegendreRule>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<GaussLegendreRule>(build_gauss_legendre(n));
    return *slot;
}

QuadratureResult integrate(const Integrand& f, const QuadratureSpec& spec) {
    int evaluations = 0;
    const Mapped g{f, spec.domain, &evaluations};
    const auto edges = working_edges(spec);
    QuadratureResult result = std::visit(
        [&](const auto& cfg) -> QuadratureResult {
            using T = std::decay_t<decltype(cfg)>;
            if constexpr (std::is_same_v<T, rule::GaussLegendre>)
                return run_fixed(g, edges, cfg);
            else
                return run_adaptive(g, edges, cfg);
        },
        spec.rule);
    result.evaluations = evaluations;
    return result;
}

QuadratureResult integrate_interval(const Integrand& f, double a, double b, double rel_tol,
                                    double abs_tol, std::span<const double> breakpoints) {
    QuadratureSpec spec;
    rule::CompositeAdaptive cfg;
    cfg.rel_tol = rel_tol;
    cfg.abs_tol = abs_tol;
    spec.rule = cfg;
    spec.domain = Domain::interval;
    spec.lower = a;
    spec.upper = b;
    spec.breakpoints.assign(breakpoints.begin(), breakpoints.end());
    return integrate(f, spec);
}

QuadratureResult integrate_half_line(const Integrand& f, double rel_tol, double abs_tol,
                                     std::span<const double> breakpoints) {
    QuadratureSpec spec;
    rule::CompositeAdaptive cfg;
    cfg.rel_tol = rel_tol;
    cfg.abs_tol = abs_tol;
    spec.rule = cfg;
    spec.domain = Domain::half_line;
    spec.breakpoints.assign(breakpoints.begin(), breakpoints.end());
    return integrate(f, spec);
}

} // namespace tzl
