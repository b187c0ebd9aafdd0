#include "doctest.h"

#include "tzl/error.hpp"
#include "tzl/hermitian_eigen.hpp"
#include "tzl/numeric.hpp"
#include "tzl/toeplitz_spectra.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace tzl;

namespace {

// (1+r^2)^{-p-1} sum_{i=0}^{p-j} C(p+1, p-i-j) r^{2i+2j+2}, in long double.
long double indicator_sum(int p, int j, long double r) {
    long double s = 0.0L;
    for (int i = 0; i <= p - j; ++i) {
        long double c = 1.0L;
        const int n = p + 1, k = p - i - j;
        for (int t = 1; t <= k; ++t) c = c * (n - k + t) / t;
        s += c * std::pow(r, 2.0L * i + 2.0L * j + 2.0L);
    }
    return s / std::pow(1.0L + r * r, static_cast<long double>(p + 1));
}

// f_k = u^k in the volume coordinate: (p+1) C(p,j) B(j+k+1, p-j+1).
double power_beta(int p, int j, int k) {
    return std::exp(std::log(p + 1.0) + std::lgamma(p + 1.0) - std::lgamma(j + 1.0) - std::lgamma(p - j + 1.0) +
                    std::lgamma(j + k + 1.0) + std::lgamma(p - j + 1.0) - std::lgamma(p + k + 2.0));
}

// int_0^inf e^{-t} (t/(1+t))^{p+1} (1+t)^j / j! dt by composite 5-point
// Gauss-Legendre on [0, 400].
double expinv_oracle(int p, int j) {
    static constexpr double x[5] = {0.0, 0.5384693101056831, -0.5384693101056831, 0.9061798459386640,
                                    -0.9061798459386640};
    static constexpr double w[5] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                                    0.2369268850561891, 0.2369268850561891};
    const int panels = 8000;
    const double h = 400.0 / panels;
    KahanSum acc;
    for (int i = 0; i < panels; ++i)
        for (int k = 0; k < 5; ++k) {
            const double t = (i + 0.5) * h + 0.5 * h * x[k];
            const double l = -t + (p + 1.0) * (std::log(t) - std::log1p(t)) + j * std::log1p(t) - std::lgamma(j + 1.0);
            acc.add(0.5 * h * w[k] * std::exp(l));
        }
    return acc.value();
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

} // namespace

TEST_CASE("spectrum_power examples") {
    CHECK(spectrum_power(1, 1).lambdas[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    const auto s = spectrum_power(2, 1);
    CHECK(s.lambdas[0] == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(s.lambdas[1] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(s.lambdas[2] == doctest::Approx(0.75).epsilon(1e-15));
    for (int p : {0, 7, 100, 500})
        for (int k : {1, 2, 3, 6}) {
            const auto sp = spectrum_power(p, k);
            CHECK(sp.method == SpectrumMethod::closed_form);
            CHECK(sp.lambdas[p] == doctest::Approx(1.0 - k / (p + k + 1.0)).epsilon(1e-13));
            for (int j = 0; j <= p; j += std::max(1, p / 9)) REQUIRE(rel(sp.lambdas[j], power_beta(p, j, k)) < 1e-11);
        }
}

TEST_CASE("spectrum_indicator examples and the sum formula") {
    const auto s = spectrum_indicator(1, 1.0);
    CHECK(s.lambdas[0] == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(s.lambdas[1] == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(spectrum_indicator(0, 1.0).lambdas[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(spectrum_indicator(3, 1.0).lambdas[3] == doctest::Approx(1.0 / 16.0).epsilon(1e-15));
    for (int p : {1, 5, 17, 30})
        for (double r : {0.25, 1.0, 3.0}) {
            const auto sp = spectrum_indicator(p, r);
            for (int j = 0; j <= p; ++j)
                REQUIRE(rel(sp.lambdas[j], static_cast<double>(indicator_sum(p, j, r))) < 1e-12);
            CHECK(sp.lambdas[0] == doctest::Approx(1.0 - std::pow(1.0 + r * r, -(p + 1.0))).epsilon(1e-13));
        }
}

TEST_CASE("spectrum_indicator keeps tiny eigenvalues in log form") {
    const auto s = spectrum_indicator(200, 0.1);
    CHECK(s.underflow);
    // lambda_p = Vol^{p+1} = 101^{-201}.
    CHECK(s.log_lambdas[200] == doctest::Approx(-201.0 * std::log(101.0)).epsilon(1e-13));
    for (int j = 1; j <= 200; ++j) REQUIRE(s.log_lambdas[j] < s.log_lambdas[j - 1]);
}

TEST_CASE("spectrum_expinv examples and oracle") {
    const double eE1 = 0.59634736232319407434;
    CHECK(spectrum_expinv(0).lambdas[0] == doctest::Approx(1.0 - eE1).epsilon(1e-11));
    CHECK(spectrum_expinv(0).lambdas[0] == doctest::Approx(0.403653).epsilon(1e-6));
    CHECK(spectrum_expinv(1).lambdas[1] == doctest::Approx(0.596347).epsilon(1e-6));
    for (int p : {1, 4, 20, 60}) {
        const auto s = spectrum_expinv(p);
        for (int j = 0; j <= p; j += std::max(1, p / 6)) REQUIRE(rel(s.lambdas[j], expinv_oracle(p, j)) < 1e-9);
        for (int j = 1; j <= p; ++j) REQUIRE(s.lambdas[j] > s.lambdas[j - 1]);
        CHECK(rel(expinv_lambda_max_alternating(p), s.lambdas[p]) < 1e-11);
    }
    for (int p : {1, 10, 64, 200, 500}) {
        const auto s = spectrum_expinv(p);
        const double sp = std::sqrt(static_cast<double>(p));
        CHECK(s.log_lambdas[0] >= -2.0 * sp - 1.0 / sp);
    }
}

TEST_CASE("quadrature oracle reproduces the closed forms") {
    CHECK(spectrum_quadrature(3, SymbolSpec::constant(1.0)).lambdas[2] == doctest::Approx(1.0).epsilon(1e-13));
    const auto q = spectrum_quadrature(2, SymbolSpec::power_vanish(1));
    CHECK(q.lambdas[0] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(q.lambdas[1] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(q.lambdas[2] == doctest::Approx(0.75).epsilon(1e-12));
    const auto d = spectrum_quadrature(1, SymbolSpec::disc(1.0));
    CHECK(d.lambdas[0] == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(d.lambdas[1] == doctest::Approx(0.25).epsilon(1e-12));
    for (int p : {0, 9, 40, 100}) {
        for (const auto& f : {SymbolSpec::power_vanish(1), SymbolSpec::power_vanish(3), SymbolSpec::disc(0.5),
                              SymbolSpec::disc(2.0), SymbolSpec::exp_inverse()}) {
            const auto a = spectrum(p, f);
            const auto b = spectrum_quadrature(p, f);
            const double tol = std::holds_alternative<symbols::DiscIndicator>(f.variant()) && p >= 100 ? 1e-8 : 1e-10;
            for (int j = 0; j <= p; ++j) REQUIRE(std::abs(std::expm1(a.log_lambdas[j] - b.log_lambdas[j])) < tol);
        }
    }
    CHECK_THROWS_AS(spectrum_quadrature(3, SymbolSpec(symbols::GeneralGrid{{0.0, 1.0}, 2, {1, 1, 1, 1}})),
                    PreconditionError);
}

TEST_CASE("spectral invariants for every radial symbol") {
    const SymbolSpec tab(symbols::RadialTabulated{{0.0, 0.5, 1.0, 2.0}, {0.2, 1.0, 0.4, 0.7}});
    for (const auto& f : {SymbolSpec::constant(2.5), SymbolSpec::power_vanish(2), SymbolSpec::exp_inverse(),
                          SymbolSpec::disc(1.0), SymbolSpec::disc(0.3).scaled(0.5), tab}) {
        for (int p : {0, 1, 13, 80, 200}) {
            const auto s = spectrum(p, f);
            for (double l : s.lambdas) {
                REQUIRE(l >= 0.0);
                REQUIRE(l <= f.sup_norm() * (1.0 + 1e-12));
            }
            const auto sum = spectral_summary(s);
            REQUIRE(std::abs(sum.trace - sum.trace_target) <= 1e-10 * sum.trace_target);
        }
    }
    const auto s = spectral_summary(spectrum_indicator(1, 1.0));
    CHECK(s.trace == doctest::Approx(1.0));
    CHECK(s.trace_target == doctest::Approx(1.0));
    CHECK(spectral_summary(spectrum(7, SymbolSpec::constant(1.0))).trace == doctest::Approx(8.0));
    const auto s2 = spectral_summary(spectrum_power(2, 1));
    CHECK(s2.trace == doctest::Approx(1.5));
    CHECK(s2.trace_target == doctest::Approx(1.5).epsilon(1e-12));
    // Zero symbol.
    const auto z = spectrum(4, SymbolSpec::constant(0.0));
    CHECK(z.max() == 0.0);
}

TEST_CASE("Hermitian Jacobi eigensolver") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    const int n = 9;
    ComplexMatrix a(n);
    for (int r = 0; r < n; ++r)
        for (int c = r; c < n; ++c) {
            a(r, c) = c == r ? complex(g(rng), 0.0) : complex(g(rng), g(rng));
            a(c, r) = std::conj(a(r, c));
        }
    const auto e = jacobi_eigen_hermitian(a);
    double trace = 0.0, sum = 0.0;
    for (int i = 0; i < n; ++i) {
        trace += a(i, i).real();
        sum += e.values[i];
        if (i > 0) CHECK(e.values[i] >= e.values[i - 1]);
        // A v = lambda v
        for (int r = 0; r < n; ++r) {
            complex av = 0.0;
            for (int c = 0; c < n; ++c) av += a(r, c) * e.vectors(c, i);
            REQUIRE(std::abs(av - e.values[i] * e.vectors(r, i)) < 1e-12);
        }
    }
    CHECK(sum == doctest::Approx(trace).epsilon(1e-13));
}

TEST_CASE("dense path") {
    const auto id = toeplitz_matrix_general(5, SymbolSpec::constant(1.0));
    CHECK(id.matrix.max_off_diagonal() < 1e-12);
    for (double l : id.spectrum.lambdas) CHECK(l == doctest::Approx(1.0).epsilon(1e-12));

    const auto pw = toeplitz_matrix_general(2, SymbolSpec::power_vanish(1));
    CHECK(pw.matrix.max_off_diagonal() < 1e-8);
    CHECK(pw.matrix(0, 0).real() == doctest::Approx(0.25).epsilon(1e-8));
    CHECK(pw.matrix(1, 1).real() == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(pw.matrix(2, 2).real() == doctest::Approx(0.75).epsilon(1e-8));

    const SymbolSpec tab(symbols::RadialTabulated{{0.0, 0.4, 1.3, 2.5}, {1.0, 0.3, 0.8, 0.1}});
    for (const auto& [p, f] : std::vector<std::pair<int, SymbolSpec>>{
             {40, SymbolSpec::disc(1.0)}, {30, SymbolSpec::power_vanish(2)}, {20, SymbolSpec::exp_inverse()}, {25, tab}}) {
        const auto d = toeplitz_matrix_general(p, f);
        CHECK(d.matrix.hermitian_defect() < 1e-10);
        auto ref = spectrum_quadrature(p, f).lambdas;
        std::sort(ref.begin(), ref.end());
        for (int j = 0; j <= p; ++j) REQUIRE(std::abs(d.spectrum.lambdas[j] - ref[j]) < 1e-7);
    }
    CHECK_THROWS_AS(toeplitz_matrix_general(101, SymbolSpec::constant(1.0)), PreconditionError);
}

TEST_CASE("dense path on a non-radial grid symbol") {
    // f = (1 + 0.8 cos theta) on rho < 1 ramping to 0.5 at rho = 2.
    const std::vector<double> radii{0.0, 1.0, 2.0};
    const int na = 64;
    std::vector<double> vals;
    for (double r : radii)
        for (int a = 0; a < na; ++a) {
            const double ang = 1.0 + 0.8 * std::cos(2.0 * kPi * a / na);
            vals.push_back(r < 1.5 ? ang : 0.5);
        }
    const SymbolSpec f(symbols::GeneralGrid{radii, na, vals});
    CHECK_FALSE(f.is_radial());
    const int p = 12;
    const auto d = toeplitz_matrix_general(p, f);
    CHECK(d.matrix.hermitian_defect() < 1e-10);
    CHECK(d.matrix.max_off_diagonal() > 1e-3);
    for (double l : d.spectrum.lambdas) {
        CHECK(l >= -1e-12);
        CHECK(l <= f.sup_norm() + 1e-12);
    }
    double tr = 0.0;
    for (double l : d.spectrum.lambdas) tr += l;
    CHECK(tr == doctest::Approx((p + 1) * f.integral()).epsilon(1e-8));

    // A grid constant in theta equals the radial tabulated symbol.
    std::vector<double> flat;
    for (double v : {1.0, 0.3, 0.9})
        for (int a = 0; a < 8; ++a) flat.push_back(v);
    const auto g = toeplitz_matrix_general(10, SymbolSpec(symbols::GeneralGrid{radii, 8, flat}));
    auto ref = spectrum_quadrature(10, SymbolSpec(symbols::RadialTabulated{radii, {1.0, 0.3, 0.9}})).lambdas;
    std::sort(ref.begin(), ref.end());
    for (int j = 0; j <= 10; ++j) CHECK(std::abs(g.spectrum.lambdas[j] - ref[j]) < 1e-7);
}

TEST_CASE("minimum eigenvalue asymptotics") {
    // prod_{i=1..k} p/(p+1+i) = 1 - e1/p + (e1^2 - e2)/p^2 - ..., with
    // e1, e2 the elementary symmetric sums of {2, ..., k+1}.
    const double second[] = {0.0, 4.0, 19.0, 55.0};
    for (int k = 1; k <= 3; ++k) {
        std::vector<int> ps;
        for (int p = 50; p <= 400; p += 25) ps.push_back(p);
        for (const auto& row : min_eig_asymptotics(SymbolSpec::power_vanish(k), ps)) {
            REQUIRE(row.corrected_statistic.has_value());
            REQUIRE(std::abs(*row.corrected_statistic) <= second[k] / (row.p * static_cast<double>(row.p)));
            // The + sign variant is off by k(k+3)/p at first order.
            REQUIRE(row.statistic == doctest::Approx(-k * (k + 3.0) / row.p).epsilon(0.1));
        }
    }
    const auto r2 = min_eig_asymptotics(SymbolSpec::power_vanish(2), {200})[0];
    CHECK(r2.lambda_min * 200.0 * 200.0 / 2.0 == doctest::Approx(0.97547).epsilon(1e-5));

    const auto e = min_eig_asymptotics(SymbolSpec::exp_inverse(), {100})[0];
    CHECK(e.statistic >= 2.0 - 0.35);
    CHECK(e.statistic <= 2.0 + 0.35);
    CHECK(e.lower_bound_holds.value());

    const auto dsc = min_eig_asymptotics(SymbolSpec::disc(1.0), {3, 50, 400});
    CHECK(dsc[0].lambda_min == doctest::Approx(1.0 / 16.0).epsilon(1e-15));
    for (const auto& row : dsc) CHECK(row.statistic == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(min_eig_asymptotics(SymbolSpec::constant(1.0), {3}), PreconditionError);
}

TEST_CASE("Weyl monotonicity") {
    const auto half = weyl_monotonicity_check(SymbolSpec::disc(1.0).scaled(0.5), SymbolSpec::disc(1.0), 10);
    CHECK(half.dominated);
    for (std::size_t j = 0; j < half.sorted1.size(); ++j)
        CHECK(half.sorted1[j] == doctest::Approx(0.5 * half.sorted2[j]).epsilon(1e-14));
    CHECK(weyl_monotonicity_check(SymbolSpec::disc(1.0), SymbolSpec::disc(2.0), 10).dominated);
    const auto same = weyl_monotonicity_check(SymbolSpec::exp_inverse(), SymbolSpec::exp_inverse(), 10);
    CHECK(same.worst_gap == 0.0);
    CHECK(weyl_monotonicity_check(SymbolSpec::power_vanish(3), SymbolSpec::power_vanish(1), 25).dominated);
    CHECK_THROWS_AS(weyl_monotonicity_check(SymbolSpec::disc(2.0), SymbolSpec::disc(1.0), 10), PreconditionError);
}

TEST_CASE("spectral distribution against the push-forward measure") {
    const auto d = spectral_cdf_compare(SymbolSpec::disc(1.0), 200, {0.5})[0];
    CHECK(d.fraction_above == doctest::Approx(0.5).epsilon(0.1));
    CHECK(d.limit_volume == doctest::Approx(0.5));
    for (const auto& row : spectral_cdf_compare(SymbolSpec::constant(1.0), 17, {0.1, 0.5, 0.99}))
        CHECK(row.fraction_above == 1.0);
    const auto pw = spectral_cdf_compare(SymbolSpec::power_vanish(1), 200, {0.5})[0];
    CHECK(std::abs(pw.fraction_above - 0.5) <= 0.05);
    CHECK(pw.limit_volume == doctest::Approx(0.5));
}
