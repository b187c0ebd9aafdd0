#include "tzl/numeric.hpp"

#include "tzl/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace tzl {

namespace {

double pairwise_sum_impl(const double* data, std::size_t n) {
    if (n <= 16) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += data[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum_impl(data, half) + pairwise_sum_impl(data + half, n - half);
}

// Pascal's triangle up to row 60; every entry fits in uint64.
const std::array<std::array<std::uint64_t, 61>, 61>& pascal_table() {
    static const auto table = [] {
        std::array<std::array<std::uint64_t, 61>, 61> t{};
        for (int n = 0; n <= 60; ++n) {
            t[n][0] = t[n][n] = 1;
            for (int k = 1; k < n; ++k) t[n][k] = t[n - 1][k - 1] + t[n - 1][k];
        }
        return t;
    }();
    return table;
}

} // namespace

double pairwise_sum(std::span<const double> values) {
    return pairwise_sum_impl(values.data(), values.size());
}

double log_sum_exp(std::span<const double> log_terms) {
    double peak = kNegInf;
    for (double x : log_terms) peak = std::max(peak, x);
    if (peak == kNegInf) return kNegInf;
    KahanSum acc;
    for (double x : log_terms) {
        if (x != kNegInf) acc.add(std::exp(x - peak));
    }
    return peak + std::log(acc.value());
}

double binomial_exact(int n, int k) {
    require(n >= 0 && n <= 60, "binomial_exact: n must lie in [0, 60]");
    if (k < 0 || k > n) return 0.0;
    return static_cast<double>(pascal_table()[n][k]);
}

double log1p_square(double m) {
    m = std::abs(m);
    if (m <= 1.0) return std::log1p(m * m);
    const double inv = 1.0 / m;
    return 2.0 * std::log(m) + std::log1p(inv * inv);
}

double log_binomial(int n, int k) {
    require(n >= 0, "log_binomial: n must be nonnegative");
    if (k < 0 || k > n) return kNegInf;
    if (n <= 60) return std::log(static_cast<double>(pascal_table()[n][k]));
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double riemann_zeta(double s) {
    require(s > 1.0, "riemann_zeta: s must exceed 1");
    constexpr int n_terms = 32;
    KahanSum acc;
    for (int n = n_terms - 1; n >= 1; --n) acc.add(std::pow(n, -s));
    const double N = n_terms;
    // Euler-Maclaurin remainder for sum_{n >= N} n^{-s}.
    acc.add(std::pow(N, 1.0 - s) / (s - 1.0));
    acc.add(0.5 * std::pow(N, -s));
    acc.add(s * std::pow(N, -s - 1.0) / 12.0);
    acc.add(-s * (s + 1.0) * (s + 2.0) * std::pow(N, -s - 3.0) / 720.0);
    acc.add(s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) * std::pow(N, -s - 5.0) / 30240.0);
    return acc.value();
}

double dilog(double x) {
    require(x >= 0.0 && x <= 1.0, "dilog: argument must lie in [0, 1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return kPi * kPi / 6.0;
    if (x > 0.5) {
        // Euler reflection keeps the series argument below 1/2.
        return kPi * kPi / 6.0 - std::log(x) * std::log1p(-x) - dilog(1.0 - x);
    }
    KahanSum acc;
    double power = x;
    for (int k = 1; k < 200; ++k) {
        const double term = power / (static_cast<double>(k) * k);
        acc.add(term);
        if (term < 1e-18 * acc.value()) break;
        power *= x;
    }
    return acc.value();
}

Moments sample_moments(std::span<const double> values) {
    Moments m;
    const std::size_t n = values.size();
    if (n == 0) return m;
    m.mean = pairwise_sum(values) / static_cast<double>(n);
    std::vector<double> d2(n), d3(n), d4(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = values[i] - m.mean;
        d2[i] = d * d;
        d3[i] = d2[i] * d;
        d4[i] = d2[i] * d2[i];
    }
    const double s2 = pairwise_sum(d2);
    const double m2 = s2 / static_cast<double>(n);
    m.variance = n > 1 ? s2 / static_cast<double>(n - 1) : 0.0;
    if (m2 > 0.0) {
        const double m3 = pairwise_sum(d3) / static_cast<double>(n);
        const double m4 = pairwise_sum(d4) / static_cast<double>(n);
        m.skewness = m3 / std::pow(m2, 1.5);
        m.excess_kurtosis = m4 / (m2 * m2) - 3.0;
    }
    return m;
}

} // namespace tzl
