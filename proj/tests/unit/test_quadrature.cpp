#include "doctest.h"

#include "tzl/fs_geometry.hpp"
#include "tzl/numeric.hpp"
#include "tzl/quadrature.hpp"

#include <cmath>

using namespace tzl;

namespace {
// e E1(1) = int_0^inf e^{-t}/(1+t) dt.
constexpr double kEE1 = 0.59634736232319407434;
} // namespace

TEST_CASE("Gauss-Legendre rules") {
    for (int n : {1, 2, 5, 15, 24, 64}) {
        const auto& r = gauss_legendre_rule(n);
        REQUIRE(static_cast<int>(r.nodes.size()) == n);
        double w = 0.0;
        for (double x : r.weights) w += x;
        CHECK(w == doctest::Approx(2.0).epsilon(1e-14));
        // Exact for x^{2n-2}: int_{-1}^1 = 2/(2n-1).
        double m = 0.0;
        for (int i = 0; i < n; ++i) m += r.weights[i] * std::pow(r.nodes[i], 2 * n - 2);
        CHECK(m == doctest::Approx(2.0 / (2 * n - 1)).epsilon(1e-13));
    }
    CHECK(&gauss_legendre_rule(24) == &gauss_legendre_rule(24));
}

TEST_CASE("integrate: examples") {
    const auto e = integrate_half_line([](double t) { return std::exp(-t); });
    CHECK(std::abs(e.value - 1.0) < 1e-12);
    CHECK(e.converged);

    const auto r = integrate_half_line([](double t) { return std::exp(-t) * t / (1.0 + t); });
    CHECK(std::abs(r.value - (1.0 - kEE1)) < 1e-9);
    CHECK(r.value == doctest::Approx(0.403653).epsilon(1e-6));

    const auto psi = integrate_interval([](double x) { return fs_density(x); }, 0.0, kSqrtPi / 2.0);
    CHECK(std::abs(psi.value - 1.0) < 1e-12);
}

TEST_CASE("two independent rules agree on spectral integrands") {
    // Beta-weighted indicator and e^{-1/rho^2} profiles, as used for lambda_j.
    for (int p : {5, 40, 100}) {
        for (int j : {0, p / 2, p}) {
            auto w = [p, j](double u) {
                if (u <= 0.0 || u >= 1.0) return 0.0;
                const double lw = std::log(p + 1.0) + log_binomial(p, j) + (j ? j * std::log(u) : 0.0) +
                                  (p - j ? (p - j) * std::log1p(-u) : 0.0);
                return std::exp(lw - (1.0 - u) / u);
            };
            QuadratureSpec gl;
            gl.rule = rule::GaussLegendre{64};
            for (int i = 1; i < 16; ++i) gl.breakpoints.push_back(i / 16.0);
            QuadratureSpec simpson;
            rule::CompositeAdaptive ad;
            ad.panel = PanelRule::simpson;
            ad.rel_tol = 1e-11;
            ad.abs_tol = 1e-300;
            simpson.rule = ad;
            const auto a = integrate(w, gl);
            const auto b = integrate(w, simpson);
            const double tol = std::max({a.achieved_tol, b.achieved_tol, 1e-12 * std::abs(a.value)});
            CHECK(std::abs(a.value - b.value) <= tol);
        }
    }
}

TEST_CASE("breakpoints resolve discontinuities") {
    const double bps[] = {0.3};
    const auto r = integrate_interval([](double x) { return x < 0.3 ? 1.0 : 0.0; }, 0.0, 1.0, 1e-12, 1e-15, bps);
    CHECK(r.value == doctest::Approx(0.3).epsilon(1e-14));

    QuadratureSpec s;
    s.domain = Domain::half_line;
    s.breakpoints = {2.0};
    const auto h = integrate([](double t) { return t < 2.0 ? std::exp(-t) : 0.0; }, s);
    CHECK(h.value == doctest::Approx(1.0 - std::exp(-2.0)).epsilon(1e-12));
}

TEST_CASE("non-convergence is reported, not hidden") {
    QuadratureSpec s;
    rule::CompositeAdaptive ad;
    ad.rel_tol = 1e-15;
    ad.abs_tol = 0.0;
    ad.max_panels = 8;
    s.rule = ad;
    const auto r = integrate([](double x) { return 1.0 / std::sqrt(x); }, s);
    CHECK_FALSE(r.converged);
    CHECK(r.achieved_tol > 0.0);
}
