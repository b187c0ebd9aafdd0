#include "tzl/bergman_basis.hpp"

#include "tzl/error.hpp"
#include "tzl/numeric.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace tzl {

namespace {

void check_degree(int p) {
    require(p >= 0, "degree p must be nonnegative");
    require(p <= kMaxDegree, "degree p = " + std::to_string(p) + " exceeds the supported maximum " +
                                 std::to_string(kMaxDegree));
}

// log|sum_j c_j z^j| evaluated by Horner in z (|z| <= 1) or in 1/z.
double log_abs_poly(std::span<const complex> c, complex z, double& log_scale_out) {
    const int p = static_cast<int>(c.size()) - 1;
    if (std::abs(z) <= 1.0) {
        complex acc = 0.0;
        for (int j = p; j >= 0; --j) acc = acc * z + c[j];
        log_scale_out = 0.0;
        return std::log(std::abs(acc));
    }
    const complex y = 1.0 / z;
    complex acc = 0.0;
    for (int j = 0; j <= p; ++j) acc = acc * y + c[j];
    log_scale_out = p * std::log(std::abs(z));
    return std::log(std::abs(acc)) + log_scale_out;
}

} // namespace

BasisIndex::BasisIndex(int p_, int j_) : p(p_), j(j_) {
    check_degree(p);
    require(j >= 0 && j <= p, "basis index j must satisfy 0 <= j <= p");
}

double log_basis_norm_coeff(int p, int j) {
    const BasisIndex idx(p, j);
    return 0.5 * (std::log(idx.p + 1.0) + log_binomial(idx.p, idx.j));
}

double basis_norm_coeff(int p, int j) {
    const BasisIndex idx(p, j);
    if (p <= 60) return std::sqrt((p + 1.0) * binomial_exact(p, j));
    return std::exp(log_basis_norm_coeff(p, j));
}

double log_pointwise_hp_norm(std::span<const complex> coeffs, const ChartPoint& z) {
    require(!coeffs.empty(), "pointwise_hp_norm: empty coefficient sequence");
    const int p = static_cast<int>(coeffs.size()) - 1;
    if (z.is_infinity()) return std::log(std::abs(coeffs[p]));
    const complex w = z.coord();
    double unused = 0.0;
    const double log_abs = log_abs_poly(coeffs, w, unused);
    return log_abs - 0.5 * p * log1p_square(std::abs(w));
}

double pointwise_hp_norm(std::span<const complex> coeffs, const ChartPoint& z) {
    return std::exp(log_pointwise_hp_norm(coeffs, z));
}

double bergman_diag(int p, const ChartPoint& z) {
    check_degree(p);
    if (z.is_infinity()) return p + 1.0;
    const double m = std::abs(z.coord());
    std::vector<double> terms(p + 1);
    const double log_r2 = 2.0 * std::log(m);
    const double log_den = p * log1p_square(m);
    for (int j = 0; j <= p; ++j) {
        const double lj = (j == 0) ? 0.0 : j * log_r2;
        terms[j] = std::log(p + 1.0) + log_binomial(p, j) + lj - log_den;
    }
    return std::exp(log_sum_exp(terms));
}

complex bergman_kernel(int p, const ChartPoint& z, const ChartPoint& w) {
    check_degree(p);
    const complex a = z.coord();
    const complex b = w.coord();
    const complex x = a * std::conj(b);
    const double scale = std::pow((1.0 + std::norm(a)) * (1.0 + std::norm(b)), -0.5 * p);
    complex acc = 0.0;
    complex power = 1.0;
    for (int j = 0; j <= p; ++j) {
        const double c = basis_norm_coeff(p, j);
        acc += c * c * power;
        power *= x;
    }
    return acc * scale;
}

} // namespace tzl
