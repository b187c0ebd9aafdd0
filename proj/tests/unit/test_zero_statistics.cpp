#include "doctest.h"

#include "tzl/error.hpp"
#include "tzl/numeric.hpp"
#include "tzl/rng.hpp"
#include "tzl/zero_statistics.hpp"

#include <algorithm>
#include <cmath>

using namespace tzl;

namespace {

// Composite 5-point Gauss-Legendre on [a, b] with `panels` panels.
template <class F>
double gl5(F&& f, double a, double b, int panels = 400) {
    static constexpr double x[5] = {0.0, 0.5384693101056831, -0.5384693101056831, 0.9061798459386640,
                                    -0.9061798459386640};
    static constexpr double w[5] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                                    0.2369268850561891, 0.2369268850561891};
    const double h = (b - a) / panels;
    KahanSum acc;
    for (int i = 0; i < panels; ++i)
        for (int k = 0; k < 5; ++k) acc.add(0.5 * h * w[k] * f(a + (i + 0.5) * h + 0.5 * h * x[k]));
    return acc.value();
}

double rho_of_u(double u) { return std::sqrt(u / (1.0 - u)); }

// int phi omega_FS for a radial phi supported in rho < rho0.
double phi_integral_oracle(const TestFunction& phi, double rho0) {
    const double u0 = rho0 * rho0 / (1.0 + rho0 * rho0);
    return gl5([&](double u) { return phi.value(rho_of_u(u)); }, 0.0, u0);
}

double sample_se(const std::vector<double>& z, double& mean) {
    KahanSum s;
    for (double v : z) s.add(v);
    mean = s.value() / z.size();
    KahanSum q;
    for (double v : z) q.add((v - mean) * (v - mean));
    return std::sqrt(q.value() / (z.size() - 1.0) / z.size());
}

ZeroSet zero_set_from(int p, std::vector<complex> roots, int at_inf = 0) {
    ZeroSet z;
    z.p = p;
    z.roots = std::move(roots);
    z.mult_infinity = at_inf;
    z.near_infinity.assign(z.roots.size(), false);
    return z;
}

} // namespace

TEST_CASE("L(phi)") {
    for (double r : {0.0, 0.3, 1.0, 2.5, 10.0}) CHECK(l_of_phi(TestFunction::constant(2.0), r) == 0.0);
    for (double r : {0.0, 0.1, 0.7, 1.9, 12.0}) CHECK(std::abs(l_of_phi(TestFunction::log_profile(), r) - 2.0 * kPi) <= 1e-10);
    const auto b = TestFunction::bump(1.3, 0.7);
    for (double r : {0.05, 0.2, 0.6, 1.0, 1.25, 1.5})
        CHECK(std::abs(l_of_phi_fd(b, r) - l_of_phi(b, r)) <= 1e-6);
    CHECK(l_of_phi(b, 2.0) == 0.0);
    CHECK_THROWS_AS(l_of_phi(b, -0.1), PreconditionError);
    // int L(phi) omega = 0 for compact support.
    const double u0 = 1.3 * 1.3 / (1.0 + 1.3 * 1.3);
    CHECK(std::abs(gl5([&](double u) { return l_of_phi(b, rho_of_u(u)); }, 0.0, u0)) <= 1e-10);
    CHECK(integral_phi(b) == doctest::Approx(phi_integral_oracle(b, 1.3)).epsilon(1e-12));
    CHECK(integral_l_squared(b) ==
          doctest::Approx(gl5([&](double u) { return std::pow(l_of_phi(b, rho_of_u(u)), 2); }, 0.0, u0)).epsilon(1e-10));
}

TEST_CASE("linear statistic") {
    const auto phi = TestFunction::bump(10.0, 1.0);
    const auto z = zero_set_from(3, {1.0, 2.0}, 1);
    CHECK(linear_statistic(z, phi) == doctest::Approx(phi.value(1.0) + phi.value(2.0)).epsilon(1e-15));
    CHECK(linear_statistic(zero_set_from(2, {complex(0.0, 20.0), 11.0}), phi) == 0.0);
    CHECK(linear_statistic(z, TestFunction::constant(1.5)) == doctest::Approx(4.5));

    const auto b = TestFunction::bump(3.0, 1.0);
    const auto zs = simulate_linear_statistics(spectrum(50, SymbolSpec::constant(1.0)), b, 11, 4000, 2);
    double mean = 0.0;
    const double se = sample_se(zs, mean);
    CHECK(std::abs(mean / 50.0 - phi_integral_oracle(b, 3.0)) <= 4.0 * se / 50.0);
}

TEST_CASE("simulation is deterministic across thread counts") {
    const auto sp = spectrum(30, SymbolSpec::exp_inverse());
    const auto a = simulate_zeros(sp, 5, 50, 1);
    const auto b = simulate_zeros(sp, 5, 50, 4);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) REQUIRE(a[i].roots == b[i].roots);
    const auto tail = simulate_zeros(sp, 5, 10, 3, 40);
    for (std::size_t i = 0; i < tail.size(); ++i) REQUIRE(tail[i].roots == a[40 + i].roots);
}

TEST_CASE("exact expectation") {
    const auto b = TestFunction::bump(1.0, 1.0);
    for (int p : {1, 10, 50}) {
        const auto e = expectation_exact(spectrum(p, SymbolSpec::constant(1.0)), b);
        CHECK(std::abs(e.correction_term) <= 1e-8);
        CHECK(e.value == doctest::Approx(p * phi_integral_oracle(b, 1.0)).epsilon(1e-10));
    }
    CHECK(expectation_exact(spectrum(10, SymbolSpec::disc(1.0)), TestFunction::bump(0.5, 0.0)).value == 0.0);

    const auto sp = spectrum(20, SymbolSpec::disc(1.0));
    const auto phi = TestFunction::bump(0.8, 1.0);
    const auto e = expectation_exact(sp, phi);
    const auto zs = simulate_linear_statistics(sp, phi, 2024, 20000, 4);
    double mean = 0.0;
    const double se = sample_se(zs, mean);
    CHECK(std::abs(mean - e.value) <= 4.0 * se);
}

TEST_CASE("expected zero count in chart discs") {
    for (int p : {1, 7, 40}) {
        const auto sp = spectrum(p, SymbolSpec::constant(1.0));
        for (double r : {0.1, 1.0, 3.0}) CHECK(expected_zero_cdf(sp, r) == doctest::Approx(p * r * r / (1 + r * r)).epsilon(1e-13));
    }
    const auto sp = spectrum(40, SymbolSpec::disc(0.5));
    CHECK(expected_zero_cdf(sp, 0.0) == 0.0);
    CHECK(expected_zero_cdf(sp, 1e8) == doctest::Approx(40.0).epsilon(1e-6));
    // Against a direct count over sampled zero sets.
    const auto zs = simulate_zeros(sp, 3, 4000, 4);
    std::vector<double> counts;
    for (const auto& z : zs) counts.push_back(std::count_if(z.roots.begin(), z.roots.end(), [](complex w) { return std::abs(w) < 0.7; }));
    double mean = 0.0;
    const double se = sample_se(counts, mean);
    CHECK(std::abs(mean - expected_zero_cdf(sp, 0.7)) <= 4.0 * se);
}

TEST_CASE("FS histogram and KS") {
    // Zeros drawn exactly from Psi.
    TrialStream st(1, 0);
    std::vector<ZeroSet> synth;
    for (int i = 0; i < 1000; ++i) {
        std::vector<complex> r;
        for (int k = 0; k < 20; ++k) {
            const double rfs = fs_inverse_cdf(st.uniform());
            r.push_back(std::polar(chart_radius_of_fs_norm(rfs), 2.0 * kPi * st.uniform()));
        }
        synth.push_back(zero_set_from(20, r));
    }
    CHECK(ks_vs_fs(synth) <= 0.015);

    const auto zs = simulate_zeros(spectrum(50, SymbolSpec::constant(1.0)), 7, 400, 4);
    CHECK(ks_vs_fs(zs) <= 0.02);
    const auto h = fs_histogram(zs, 50);
    CHECK(h.total == 20000);
    long long sum = 0;
    double integral = 0.0;
    for (std::size_t i = 0; i < h.counts.size(); ++i) {
        sum += h.counts[i];
        integral += h.density[i] * (h.bin_edges[i + 1] - h.bin_edges[i]);
        CHECK(h.density[i] >= 0.0);
        CHECK(h.psi_mid[i] == doctest::Approx(fs_density(0.5 * (h.bin_edges[i] + h.bin_edges[i + 1]))));
    }
    CHECK(sum == h.total);
    CHECK(integral == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(h.bin_edges.front() == 0.0);
    CHECK(h.bin_edges.back() == doctest::Approx(fs_diameter()));

    // Infinity rows land in the last bin and are counted.
    std::vector<ZeroSet> inf{zero_set_from(3, {0.5}, 2)};
    const auto hi = fs_histogram(inf, 10);
    CHECK(hi.total == 3);
    CHECK(hi.at_infinity == 2);
    CHECK(hi.counts.back() == 2);

    // Outside the support of an indicator the zeros do not follow Psi.
    const auto dz = simulate_zeros(spectrum(20, SymbolSpec::disc(1.0)), 9, 1000, 4);
    CHECK(ks_vs_fs(dz) > 0.05);
    CHECK(ks_vs_fs_restricted(dz, fs_diameter()) == doctest::Approx(ks_vs_fs(dz)));
    CHECK(ks_vs_cdf(dz, [](double r) { return fs_cdf(r); }, fs_diameter()) == doctest::Approx(ks_vs_fs(dz)));
}

TEST_CASE("CLT report") {
    const auto sp = spectrum(100, SymbolSpec::constant(1.0));
    const auto phi = TestFunction::bump(1.0, 1.0);
    const auto r = clt_report(sp, phi, 2000, 17, 4, true);
    CHECK(r.trials == 2000);
    CHECK(r.variance > 0.0);
    CHECK(r.ks_vs_normal <= 0.05);
    CHECK(std::abs(r.skewness) <= 0.15);
    CHECK(std::abs(r.excess_kurtosis) <= 0.3);
    REQUIRE(r.per_trial.has_value());
    REQUIRE(r.standardized.has_value());
    CHECK(r.per_trial->size() == 2000);
    const auto again = clt_report(sp, phi, 2000, 17, 1, false);
    CHECK(again.mean == r.mean);
    CHECK(again.variance == r.variance);
    CHECK(again.ks_vs_normal == r.ks_vs_normal);
    CHECK_FALSE(again.per_trial.has_value());

    CHECK_THROWS_AS(clt_report(sp, phi, 999, 17), PreconditionError);
    CHECK_THROWS_AS(monte_carlo_report(std::vector<double>(10, 1.0)), PreconditionError);
    const auto m = monte_carlo_report({1.0, 2.0, 3.0, 4.0});
    CHECK(m.mean == doctest::Approx(2.5));
    CHECK(m.variance == doctest::Approx(5.0 / 3.0));
    CHECK(m.skewness == doctest::Approx(0.0));
}

TEST_CASE("hole frequencies") {
    const auto c = SymbolSpec::constant(1.0);
    CHECK(hole_frequency(c, FSDisc::chart_disc(0.3), {0}, 100, 1).rows[0].frequency == 1.0);
    const FSDisc sphere{ChartPoint::finite(0.0), fs_diameter()};
    CHECK(sphere.contains(ChartPoint::infinity()));
    CHECK(hole_frequency(c, sphere, {1, 5}, 200, 1).rows[1].frequency == 0.0);
    CHECK(hole_frequency(c, sphere, {1, 5}, 200, 1).rows[0].frequency == 0.0);

    const auto rep = hole_frequency(c, FSDisc::chart_disc(0.3), {5, 10, 20, 40}, 5000, 2718, 4);
    REQUIRE(rep.rows.size() == 4);
    CHECK(rep.rows[0].holes >= 10);
    CHECK(rep.monotone());
    for (const auto& row : rep.rows) CHECK(row.se == doctest::Approx(std::sqrt(row.frequency * (1 - row.frequency) / row.trials)));
    // Exact for p = 1: the single zero is uniform for omega_FS, so
    // P(hole) = 1 - Vol(D(0, 0.3)).
    const auto p1 = hole_frequency(c, FSDisc::chart_disc(0.3), {1}, 20000, 5, 4).rows[0];
    CHECK(std::abs(p1.frequency - (1.0 - 0.09 / 1.09)) <= 4.0 * p1.se);
}

TEST_CASE("mass statistic") {
    const auto one = TestFunction::constant(1.0);
    for (int p : {1, 5, 40}) {
        const auto mm = mass_moments(spectrum(p, SymbolSpec::constant(1.0)), one);
        CHECK(mm.mean == doctest::Approx((p + 1.0) / p).epsilon(1e-14));
        CHECK(mm.variance == doctest::Approx((p + 1.0) / (p * double(p))).epsilon(1e-14));
    }
    const auto lln = mass_lln_report(SymbolSpec::constant(1.0), one, 200, 4, 4);
    CHECK(lln.rows.size() == 200);
    CHECK(lln.limit == doctest::Approx(1.0));
    CHECK(std::abs(lln.running_average - 1.0) <= 0.05);

    const auto sp = spectrum(10, SymbolSpec::power_vanish(1));
    CHECK(mass_statistic(sample_section(sp, 1, 0), TestFunction::constant(0.0)) == 0.0);

    // Weights against a direct radial integral.
    const auto g = TestFunction::bump(1.5, 2.0);
    const auto w = mass_weights(10, g);
    const double u0 = 2.25 / 3.25;
    for (int j = 0; j <= 10; ++j) {
        const double ref = gl5([&](double u) { return g.value(rho_of_u(u)) * 11.0 * binomial_exact(10, j) * std::pow(u, j) * std::pow(1.0 - u, 10 - j); }, 0.0, u0);
        CHECK(w[j] == doctest::Approx(ref).epsilon(1e-10));
    }

    // Y for one sample against a 2-D quadrature of |S|^2_h over the chart.
    const auto s = sample_section(sp, 8, 3);
    std::vector<complex> c(s.coeffs);
    for (auto& v : c) v = std::ldexp(1.0, -s.scale_exponent) * v;
    const int na = 64;
    const double direct = gl5([&](double u) {
        const double rho = rho_of_u(u);
        double ring = 0.0;
        for (int a = 0; a < na; ++a) {
            const complex z = std::polar(rho, 2.0 * kPi * a / na);
            complex acc = 0.0;
            for (int j = 10; j >= 0; --j) acc = acc * z + c[j];
            ring += std::norm(acc) * std::pow(1.0 - u, 10);
        }
        return g.value(rho) * ring / na;
    }, 0.0, u0) / 10.0;
    CHECK(mass_statistic(s, g) == doctest::Approx(direct).epsilon(1e-9));

    // Exact moments against Monte Carlo.
    for (const auto& f : {SymbolSpec::constant(1.0), SymbolSpec::power_vanish(2), SymbolSpec::exp_inverse(), SymbolSpec::disc(1.0)}) {
        const auto spf = spectrum(10, f);
        const auto wf = mass_weights(10, g);
        const auto mm = mass_moments(spf, wf);
        const int n = 20000;
        std::vector<double> y(n);
        for (int t = 0; t < n; ++t) y[t] = mass_statistic(sample_section(spf, 55, t), wf);
        double mean = 0.0;
        const double se = sample_se(y, mean);
        CHECK(std::abs(mean - mm.mean) <= 3.0 * se);
        KahanSum m2, m4;
        for (double v : y) {
            m2.add((v - mean) * (v - mean));
            m4.add(std::pow(v - mean, 4));
        }
        const double var = m2.value() / (n - 1);
        const double var_se = std::sqrt((m4.value() / n - var * var) / n);
        CHECK(std::abs(var - mm.variance) <= 3.0 * var_se);
    }
}
