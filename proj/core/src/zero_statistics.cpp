#include "tzl/zero_statistics.hpp"

#include "tzl/bergman_basis.hpp"
#include "tzl/error.hpp"
#include "tzl/gaussian_sampler.hpp"
#include "tzl/numeric.hpp"
#include "tzl/parallel.hpp"
#include "tzl/quadrature.hpp"
#include "tzl/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tzl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double radius_of_volume(double u) { return std::sqrt(u / (1.0 - u)); }
double volume_of_radius(double rho) { return rho * rho / (1.0 + rho * rho); }

double r_fs_of(const complex& z) { return fs_norm_of_modulus(std::abs(z)); }

// Top of the u-range where L(phi) can be nonzero.
double l_support_volume(const TestFunction& phi) {
    const double r = phi.support_radius();
    return std::isfinite(r) ? volume_of_radius(r) : 1.0;
}

std::vector<double> clip_breakpoints(std::vector<double> bps, double lo, double hi) {
    std::vector<double> out;
    for (double b : bps)
        if (b > lo && b < hi) out.push_back(b);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<double> all_fs_norms(std::span<const ZeroSet> zerosets) {
    std::vector<double> r;
    for (const auto& zs : zerosets) {
        for (const auto& z : zs.roots) r.push_back(r_fs_of(z));
        for (int k = 0; k < zs.mult_infinity; ++k) r.push_back(fs_diameter());
    }
    return r;
}

} // namespace

std::vector<ZeroSet> simulate_zeros(const ToeplitzSpectrum& spectrum, std::uint64_t seed, std::size_t trials,
                                    int threads, std::uint64_t first) {
    std::vector<ZeroSet> out(trials);
    parallel_for(trials, threads, [&](std::size_t i) {
        out[i] = find_roots(sample_section(spectrum, seed, first + i));
    });
    return out;
}

double linear_statistic(const ZeroSet& zeros, const TestFunction& phi) {
    std::vector<double> terms;
    terms.reserve(zeros.roots.size() + 1);
    for (const auto& z : zeros.roots) terms.push_back(phi.value(std::abs(z)));
    if (zeros.mult_infinity > 0) terms.push_back(zeros.mult_infinity * phi.value(ChartPoint::infinity()));
    return pairwise_sum(terms);
}

std::vector<double> simulate_linear_statistics(const ToeplitzSpectrum& spectrum, const TestFunction& phi,
                                               std::uint64_t seed, std::size_t trials, int threads) {
    std::vector<double> z(trials);
    parallel_for(trials, threads, [&](std::size_t i) {
        z[i] = linear_statistic(find_roots(sample_section(spectrum, seed, i)), phi);
    });
    return z;
}

ExpectationResult expectation_exact(const ToeplitzSpectrum& spectrum, const TestFunction& phi) {
    require(spectrum.symbol.is_radial(), "expectation_exact: radial symbol required");
    ExpectationResult r;
    const int p = spectrum.p;
    if (phi.is_constant()) {
        const double c = phi.value(0.0);
        r.smooth_term = p * c;
        r.value = r.smooth_term;
        return r;
    }
    r.smooth_term = p * integral_phi(phi);
    const KernelEvaluator ev(spectrum);
    const double top = l_support_volume(phi);
    const auto bps = clip_breakpoints(phi.volume_breakpoints(), 0.0, top);
    const auto q = integrate_interval(
        [&](double u) {
            if (u <= 0.0 || u >= 1.0) return 0.0;
            const double rho = radius_of_volume(u);
            const double l = l_of_phi(phi, rho);
            if (l == 0.0) return 0.0;
            return ev.log_diag(ChartPoint::finite(rho)) * l;
        },
        0.0, top, 1e-11, 1e-13, bps);
    if (!q.converged) throw ConvergenceError("expectation_exact: quadrature did not converge", q.achieved_tol);
    r.correction_term = q.value / (2.0 * kPi);
    r.achieved_tol = q.achieved_tol / (2.0 * kPi);
    r.value = r.smooth_term + r.correction_term;
    return r;
}

double expected_zero_cdf(const ToeplitzSpectrum& spectrum, double rho) {
    require(rho >= 0.0, "expected_zero_cdf: rho must be >= 0");
    const KernelEvaluator ev(spectrum);
    const auto lw = ev.log_weights();
    const int p = spectrum.p;
    int top = p;
    while (top >= 0 && lw[top] == kNegInf) --top;
    if (top < 0) return 0.0;
    if (std::isinf(rho)) return top;
    if (rho == 0.0) {
        int low = 0;
        while (lw[low] == kNegInf) ++low;
        return low;
    }
    const double lr = std::log(rho);
    std::vector<double> t(p + 1), tj;
    for (int j = 0; j <= p; ++j) t[j] = lw[j] + 2.0 * j * lr;
    for (int j = 1; j <= p; ++j) tj.push_back(t[j] + std::log(static_cast<double>(j)));
    return std::exp(log_sum_exp(tj) - log_sum_exp(t));
}

std::vector<double> zero_fs_norms(std::span<const ZeroSet> zerosets) { return all_fs_norms(zerosets); }

FSHistogram fs_histogram(std::span<const ZeroSet> zerosets, int bins) {
    require(bins >= 1, "fs_histogram: bins must be >= 1");
    FSHistogram h;
    const double top = fs_diameter();
    const double width = top / bins;
    h.bin_edges.resize(bins + 1);
    for (int b = 0; b <= bins; ++b) h.bin_edges[b] = b == bins ? top : b * width;
    h.counts.assign(bins, 0);
    for (const auto& zs : zerosets) {
        for (const auto& z : zs.roots) {
            const int b = std::min(bins - 1, static_cast<int>(r_fs_of(z) / width));
            ++h.counts[b];
        }
        h.counts[bins - 1] += zs.mult_infinity;
        h.at_infinity += zs.mult_infinity;
    }
    for (long long c : h.counts) h.total += c;
    require(h.total >= 1, "fs_histogram: no zeros");
    h.density.resize(bins);
    h.psi_mid.resize(bins);
    for (int b = 0; b < bins; ++b) {
        h.density[b] = static_cast<double>(h.counts[b]) / (static_cast<double>(h.total) * width);
        h.psi_mid[b] = fs_density(0.5 * (h.bin_edges[b] + h.bin_edges[b + 1]));
    }
    return h;
}

double ks_vs_fs(std::span<const ZeroSet> zerosets) {
    auto r = all_fs_norms(zerosets);
    require(!r.empty(), "ks_vs_fs: no zeros");
    return ks_distance(std::move(r), [](double x) { return fs_cdf(std::min(x, fs_diameter())); });
}

double ks_vs_cdf(std::span<const ZeroSet> zerosets, const std::function<double(double)>& cdf, double r_max) {
    auto r = all_fs_norms(zerosets);
    require(!r.empty(), "ks_vs_cdf: no zeros");
    std::sort(r.begin(), r.end());
    const double n = static_cast<double>(r.size());
    double d = 0.0;
    std::size_t i = 0;
    for (; i < r.size() && r[i] <= r_max; ++i) {
        const double f = cdf(r[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    // Empirical CDF is flat from the last sample to r_max.
    d = std::max(d, std::abs(static_cast<double>(i) / n - cdf(std::min(r_max, fs_diameter()))));
    return std::clamp(d, 0.0, 1.0);
}

double ks_vs_fs_restricted(std::span<const ZeroSet> zerosets, double r_max) {
    return ks_vs_cdf(zerosets, [](double x) { return fs_cdf(std::min(x, fs_diameter())); }, r_max);
}

MonteCarloReport monte_carlo_report(std::vector<double> z, bool keep_per_trial) {
    require(z.size() >= 2, "monte_carlo_report: need at least two trials");
    MonteCarloReport rep;
    rep.trials = z.size();
    const Moments m = sample_moments(z);
    rep.mean = m.mean;
    rep.variance = m.variance;
    rep.skewness = m.skewness;
    rep.excess_kurtosis = m.excess_kurtosis;
    require(m.variance > 0.0, "monte_carlo_report: degenerate sample (all values equal)");
    const double sd = std::sqrt(m.variance);
    std::vector<double> zs(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) zs[i] = (z[i] - m.mean) / sd;
    rep.ks_vs_normal = ks_distance(zs, [](double x) { return normal_cdf(x); });
    if (keep_per_trial) {
        rep.per_trial = std::move(z);
        rep.standardized = std::move(zs);
    }
    return rep;
}

MonteCarloReport clt_report(const ToeplitzSpectrum& spectrum, const TestFunction& phi, std::size_t trials,
                            std::uint64_t seed, int threads, bool keep_per_trial) {
    require(trials >= 1000, "clt_report: need at least 1000 trials");
    return monte_carlo_report(simulate_linear_statistics(spectrum, phi, seed, trials, threads), keep_per_trial);
}

bool FSDisc::contains(const ChartPoint& z) const { return fs_distance(center, z) <= fs_radius; }

HoleReport hole_frequency(const SymbolSpec& symbol, const FSDisc& region, const std::vector<int>& p_list,
                          std::size_t trials, std::uint64_t seed, int threads) {
    require(region.fs_radius > 0.0, "hole_frequency: region must have positive volume");
    require(trials >= 1, "hole_frequency: need at least one trial");
    HoleReport rep;
    for (int p : p_list) {
        const auto spec = spectrum(p, symbol);
        const std::uint64_t s = derive_seed(seed, static_cast<std::uint64_t>(p));
        std::vector<char> hole(trials, 0);
        parallel_for(trials, threads, [&](std::size_t t) {
            const ZeroSet zs = find_roots(sample_section(spec, s, t));
            bool empty = !(zs.mult_infinity > 0 && region.contains(ChartPoint::infinity()));
            for (std::size_t i = 0; empty && i < zs.roots.size(); ++i)
                if (region.contains(ChartPoint::finite(zs.roots[i]))) empty = false;
            hole[t] = empty ? 1 : 0;
        });
        HoleRow row;
        row.p = p;
        row.trials = trials;
        row.holes = static_cast<std::size_t>(std::count(hole.begin(), hole.end(), 1));
        row.frequency = static_cast<double>(row.holes) / static_cast<double>(trials);
        row.se = std::sqrt(row.frequency * (1.0 - row.frequency) / static_cast<double>(trials));
        rep.rows.push_back(row);
    }
    for (std::size_t i = 1; i < rep.rows.size(); ++i) {
        const auto& a = rep.rows[i - 1];
        const auto& b = rep.rows[i];
        const double band = 2.0 * std::hypot(a.se, b.se);
        if (!(b.frequency < a.frequency || (a.frequency == 0.0 && b.frequency == 0.0)))
            rep.strictly_decreasing = false;
        if (b.frequency - a.frequency > band) rep.within_band = false;
    }
    return rep;
}

std::vector<double> mass_weights(int p, const TestFunction& g) {
    require(p >= 0 && p <= kMaxDegree, "mass_weights: p out of range");
    std::vector<double> m(p + 1);
    if (const auto* c = std::get_if<phi::Constant>(&g.variant())) {
        std::fill(m.begin(), m.end(), c->c);
        return m;
    }
    require(std::isfinite(g.value(ChartPoint::infinity())), "mass_weights: g must be bounded");
    double gmax = 0.0;
    for (int i = 0; i <= 256; ++i) gmax = std::max(gmax, std::abs(g.value(radius_of_volume(i / 257.0))));
    const auto gb = g.volume_breakpoints();
    for (int j = 0; j <= p; ++j) {
        const double lc = std::log(p + 1.0) + log_binomial(p, j);
        const double mode = p == 0 ? 0.5 : static_cast<double>(j) / p;
        const double sigma = std::sqrt((j + 1.0) * (p - j + 1.0) / ((p + 2.0) * (p + 2.0) * (p + 3.0)));
        std::vector<double> bps = gb;
        for (double c : {-8.0, -3.0, 0.0, 3.0, 8.0}) bps.push_back(mode + c * sigma);
        bps = clip_breakpoints(std::move(bps), 0.0, 1.0);
        const auto r = integrate_interval(
            [&](double u) {
                if (u <= 0.0 || u >= 1.0) return 0.0;
                const double lw = lc + (j > 0 ? j * std::log(u) : 0.0) + (p - j > 0 ? (p - j) * std::log1p(-u) : 0.0);
                return g.value(radius_of_volume(u)) * std::exp(lw);
            },
            0.0, 1.0, 1e-12, 1e-14 * std::max(gmax, 1e-300), bps);
        if (!r.converged) throw ConvergenceError("mass_weights: quadrature did not converge", r.achieved_tol);
        m[j] = r.value;
    }
    return m;
}

double mass_statistic(const SectionSample& sample, const std::vector<double>& weights) {
    require(sample.p >= 1, "mass_statistic: p must be >= 1");
    require(static_cast<int>(weights.size()) == sample.p + 1, "mass_statistic: weight length mismatch");
    std::vector<double> terms(sample.p + 1, 0.0);
    const double shift = 2.0 * sample.scale_exponent * std::log(2.0);
    for (int j = 0; j <= sample.p; ++j) {
        const double a = std::abs(sample.coeffs[j]);
        if (a == 0.0 || weights[j] == 0.0) continue;
        terms[j] = weights[j] * std::exp(2.0 * std::log(a) - shift - 2.0 * log_basis_norm_coeff(sample.p, j));
    }
    return pairwise_sum(terms) / sample.p;
}

double mass_statistic(const SectionSample& sample, const TestFunction& g) {
    return mass_statistic(sample, mass_weights(sample.p, g));
}

MassMoments mass_moments(const ToeplitzSpectrum& spectrum, const std::vector<double>& weights) {
    const int p = spectrum.p;
    require(p >= 1, "mass_moments: p must be >= 1");
    std::vector<double> t1(p + 1), t2(p + 1);
    for (int j = 0; j <= p; ++j) {
        const double l2 = std::exp(2.0 * spectrum.log_lambdas[j]);
        t1[j] = l2 * weights[j];
        t2[j] = t1[j] * t1[j];
    }
    return {pairwise_sum(t1) / p, pairwise_sum(t2) / (static_cast<double>(p) * p)};
}

MassMoments mass_moments(const ToeplitzSpectrum& spectrum, const TestFunction& g) {
    return mass_moments(spectrum, mass_weights(spectrum.p, g));
}

MassLlnReport mass_lln_report(const SymbolSpec& symbol, const TestFunction& g, int n_max, std::uint64_t seed,
                              int threads) {
    require(n_max >= 1 && n_max <= kMaxDegree, "mass_lln_report: N must lie in [1, 500]");
    require(symbol.is_radial(), "mass_lln_report: radial symbol required");
    MassLlnReport rep;
    rep.rows.resize(n_max);
    parallel_for(static_cast<std::size_t>(n_max), threads, [&](std::size_t i) {
        const int p = static_cast<int>(i) + 1;
        const auto spec = spectrum(p, symbol);
        rep.rows[i] = {p, mass_statistic(sample_section(spec, seed, static_cast<std::uint64_t>(p)), g)};
    });
    std::vector<double> y;
    for (const auto& r : rep.rows) y.push_back(r.y);
    rep.running_average = pairwise_sum(y) / n_max;
    auto bps = symbol.volume_breakpoints();
    for (double b : g.volume_breakpoints()) bps.push_back(b);
    bps = clip_breakpoints(std::move(bps), 0.0, 1.0);
    rep.limit = integrate_interval(
                    [&](double u) {
                        if (u <= 0.0 || u >= 1.0) return 0.0;
                        const double f = symbol.value_at_volume(u);
                        return g.value(radius_of_volume(u)) * f * f;
                    },
                    0.0, 1.0, 1e-12, 1e-14, bps)
                    .value;
    return rep;
}

} // namespace tzl
