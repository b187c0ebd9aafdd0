#pragma once

// Small numerical kernels shared by every module: compensated and pairwise
// summation, log-domain accumulation, binomials and a few special functions.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

namespace tzl {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kSqrtPi = 1.7724538509055160273;
inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Neumaier's variant of Kahan summation.
class KahanSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Pairwise summation in index order. The result depends only on the input
/// sequence, never on how it was produced.
double pairwise_sum(std::span<const double> values);

/// log(sum exp(x_i)) with compensated accumulation of the shifted terms.
/// Entries equal to -inf are skipped; an empty or all -inf input yields -inf.
double log_sum_exp(std::span<const double> log_terms);

/// log(1 + m^2) without overflow for huge m.
double log1p_square(double m);

/// log C(n, k). Exact integer path for n <= 60, log-gamma otherwise.
double log_binomial(int n, int k);

/// Exact C(n, k) as a double for n <= 60 (used by tests and small-p paths).
double binomial_exact(int n, int k);

/// Riemann zeta for real s > 1, accurate to ~1e-15 (Euler-Maclaurin tail).
double riemann_zeta(double s);

/// Real dilogarithm Li2(x) for 0 <= x <= 1.
double dilog(double x);

/// Weighted statistics on a fixed sequence.
struct Moments {
    double mean = 0.0;
    double variance = 0.0;        // unbiased
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
};
Moments sample_moments(std::span<const double> values);

/// Standard normal CDF.
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

/// Two-sided KS distance of a sample against a continuous CDF.
template <class Cdf>
double ks_distance(std::vector<double> sample, Cdf&& cdf);

} // namespace tzl

#include <algorithm>

namespace tzl {

template <class Cdf>
double ks_distance(std::vector<double> sample, Cdf&& cdf) {
    if (sample.empty()) return 0.0;
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        d = std::max(d, std::max(static_cast<double>(i + 1) / n - f,
                                 f - static_cast<double>(i) / n));
    }
    return std::clamp(d, 0.0, 1.0);
}

} // namespace tzl
