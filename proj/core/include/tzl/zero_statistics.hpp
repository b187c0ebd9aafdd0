#pragma once

// Statistics of the zero divisors of Gaussian sections S_{f,p}: FS-norm
// histograms and KS distances, linear statistics Z(phi), the exact
// expectation, CLT reports, hole frequencies and the mass statistic.

#include "tzl/poly_roots.hpp"
#include "tzl/test_function.hpp"
#include "tzl/toeplitz_spectra.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace tzl {

/// Zeros of trials [first, first + trials) for (spectrum, seed).
std::vector<ZeroSet> simulate_zeros(const ToeplitzSpectrum& spectrum, std::uint64_t seed,
                                    std::size_t trials, int threads = 1, std::uint64_t first = 0);

/// Z(phi) = sum over the divisor of phi, infinity included.
double linear_statistic(const ZeroSet& zeros, const TestFunction& phi);

/// Z(phi) per trial.
std::vector<double> simulate_linear_statistics(const ToeplitzSpectrum& spectrum, const TestFunction& phi,
                                               std::uint64_t seed, std::size_t trials, int threads = 1);

struct ExpectationResult {
    double value = 0.0;
    double smooth_term = 0.0;      // p int phi omega
    double correction_term = 0.0;  // (1/2pi) int log T^2 L(phi) omega
    double achieved_tol = 0.0;
};

/// E[Z(phi)] for radial phi and a radial spectrum.
ExpectationResult expectation_exact(const ToeplitzSpectrum& spectrum, const TestFunction& phi);

/// Expected number of zeros in the chart disc D(0, rho):
///   sum_j j w_j / sum_j w_j,  w_j = lambda_j^2 (p+1) C(p,j) rho^{2j}.
double expected_zero_cdf(const ToeplitzSpectrum& spectrum, double rho);

/// Chart radius of each zero (infinity as +inf), in trial order.
std::vector<double> zero_fs_norms(std::span<const ZeroSet> zerosets);

struct FSHistogram {
    std::vector<double> bin_edges;  // bins + 1 values over [0, sqrt(pi)/2]
    std::vector<long long> counts;
    std::vector<double> density;
    std::vector<double> psi_mid;
    long long total = 0;
    long long at_infinity = 0;  // zeros at infinity, binned in the last bin
};

FSHistogram fs_histogram(std::span<const ZeroSet> zerosets, int bins = 50);

/// sup_r |F_emp(r) - Psi(r)| over all r.
double ks_vs_fs(std::span<const ZeroSet> zerosets);
/// sup over r <= r_max of |F_emp(r) - Psi(r)| (unconditional CDFs).
double ks_vs_fs_restricted(std::span<const ZeroSet> zerosets, double r_max);
/// sup over r <= r_max of |F_emp(r) - cdf(r)| for a model CDF in r_FS.
double ks_vs_cdf(std::span<const ZeroSet> zerosets, const std::function<double(double)>& cdf,
                 double r_max);

struct MonteCarloReport {
    std::size_t trials = 0;
    double mean = 0.0;
    double variance = 0.0;
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
    double ks_vs_normal = 0.0;
    std::optional<std::vector<double>> per_trial;
    std::optional<std::vector<double>> standardized;
};

/// Moments and normality of Z(phi). Throws PreconditionError if all Z agree.
MonteCarloReport clt_report(const ToeplitzSpectrum& spectrum, const TestFunction& phi, std::size_t trials,
                            std::uint64_t seed, int threads = 1, bool keep_per_trial = false);
/// Same report from precomputed Z values.
MonteCarloReport monte_carlo_report(std::vector<double> z, bool keep_per_trial = false);

/// Closed FS disc {w : dist(center, w) <= fs_radius}.
struct FSDisc {
    ChartPoint center;
    double fs_radius = 0.0;

    static FSDisc chart_disc(double r) { return {ChartPoint::finite(0.0), fs_norm_of_modulus(r)}; }
    bool contains(const ChartPoint& z) const;
};

struct HoleRow {
    int p = 0;
    std::size_t trials = 0;
    std::size_t holes = 0;
    double frequency = 0.0;
    double se = 0.0;  // binomial standard error
};

struct HoleReport {
    std::vector<HoleRow> rows;
    /// Every step decreases, except 0 -> 0 (no holes left to observe).
    bool strictly_decreasing = true;
    /// No step rises by more than 2 standard errors of the difference.
    bool within_band = true;

    bool monotone() const noexcept { return strictly_decreasing && within_band; }
};

/// Each p uses master seed derive_seed(seed, p).
HoleReport hole_frequency(const SymbolSpec& symbol, const FSDisc& region, const std::vector<int>& p_list,
                          std::size_t trials, std::uint64_t seed, int threads = 1);

/// m_j(g) = (p+1) C(p,j) int g(sqrt t) t^j / (1+t)^{p+2} dt, j = 0..p.
std::vector<double> mass_weights(int p, const TestFunction& g);

/// Y = p^{-1} int g |S|^2_{h_p} dV for the true (unscaled) section.
double mass_statistic(const SectionSample& sample, const std::vector<double>& weights);
double mass_statistic(const SectionSample& sample, const TestFunction& g);

struct MassMoments {
    double mean = 0.0;
    double variance = 0.0;
};

/// E[Y] = p^{-1} sum lambda_j^2 m_j, Var[Y] = p^{-2} sum lambda_j^4 m_j^2.
MassMoments mass_moments(const ToeplitzSpectrum& spectrum, const std::vector<double>& weights);
MassMoments mass_moments(const ToeplitzSpectrum& spectrum, const TestFunction& g);

struct MassRow {
    int p = 0;
    double y = 0.0;
};

struct MassLlnReport {
    std::vector<MassRow> rows;   // p = 1..N, one trial each (trial index p)
    double running_average = 0.0;
    double limit = 0.0;          // int g f^2 omega
};

MassLlnReport mass_lln_report(const SymbolSpec& symbol, const TestFunction& g, int n_max, std::uint64_t seed,
                              int threads = 1);

} // namespace tzl
