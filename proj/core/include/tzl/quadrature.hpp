#pragma once

// Deterministic 1-D integration engines.
//
// Two independent panel rules are available behind one adaptive driver:
// Gauss-Legendre (nodes by Newton iteration on P_n) and Simpson. The driver
// is global-adaptive: it repeatedly bisects the panel with the largest error
// estimate until the summed estimate meets max(abs_tol, rel_tol * |I|).
// Half-line integrals use t = u / (1 - u).

#include <functional>
#include <span>
#include <variant>
#include <vector>

namespace tzl {

struct GaussLegendreRule {
    std::vector<double> nodes;   // on [-1, 1], ascending
    std::vector<double> weights;
};

/// n-point rule, cached after the first request. Thread-safe.
const GaussLegendreRule& gauss_legendre_rule(int n);

enum class PanelRule { gauss_legendre, simpson };

namespace rule {
/// Fixed n-point Gauss-Legendre on every breakpoint panel; achieved_tol is
/// |Q_n - Q_{n/2}| summed over panels.
struct GaussLegendre {
    int n = 64;
};
struct CompositeAdaptive {
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
    int max_depth = 40;
    PanelRule panel = PanelRule::gauss_legendre;
    int panel_order = 15;  // Gauss-Legendre points per panel
    int max_panels = 20000;
};
} // namespace rule

enum class Domain { interval, half_line };

struct QuadratureSpec {
    std::variant<rule::GaussLegendre, rule::CompositeAdaptive> rule = rule::CompositeAdaptive{};
    Domain domain = Domain::interval;
    double lower = 0.0;  // interval only
    double upper = 1.0;  // interval only
    /// Sorted points inside the domain (in the original variable t).
    std::vector<double> breakpoints;
};

struct QuadratureResult {
    double value = 0.0;
    double achieved_tol = 0.0;
    bool converged = true;
    int evaluations = 0;
};

using Integrand = std::function<double(double)>;

QuadratureResult integrate(const Integrand& f, const QuadratureSpec& spec);

/// Convenience: adaptive Gauss-Legendre on [a, b] with breakpoints.
QuadratureResult integrate_interval(const Integrand& f, double a, double b,
                                    double rel_tol = 1e-12, double abs_tol = 0.0,
                                    std::span<const double> breakpoints = {});

/// Convenience: adaptive Gauss-Legendre on [0, inf) with breakpoints in t.
QuadratureResult integrate_half_line(const Integrand& f, double rel_tol = 1e-12,
                                     double abs_tol = 0.0,
                                     std::span<const double> breakpoints = {});

} // namespace tzl
