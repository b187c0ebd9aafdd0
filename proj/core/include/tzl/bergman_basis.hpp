#pragma once

// Orthonormal monomial basis of H^0(CP^1, O(p)) for the L^2 product built
// from h_FS^p and omega_FS:  S^p_j(z) = sqrt((p+1) C(p, j)) z^j.

#include "tzl/fs_geometry.hpp"

#include <span>

namespace tzl {

/// Largest supported tensor power.
inline constexpr int kMaxDegree = 500;

struct BasisIndex {
    int p = 0;
    int j = 0;

    BasisIndex(int p_, int j_);
};

double basis_norm_coeff(int p, int j);
/// log sqrt((p+1) C(p, j)).
double log_basis_norm_coeff(int p, int j);

/// |s(z)|_{h_p} for s(z) = sum_j coeffs[j] z^j with p = coeffs.size() - 1.
/// At infinity this is |coeffs[p]|.
double pointwise_hp_norm(std::span<const complex> coeffs, const ChartPoint& z);
double log_pointwise_hp_norm(std::span<const complex> coeffs, const ChartPoint& z);

/// Bergman kernel on the diagonal, P_p(z, z) = sum_j |S^p_j(z)|^2_{h_p}.
/// On CP^1 this is identically p + 1.
double bergman_diag(int p, const ChartPoint& z);

/// Bergman kernel P_p(z, w) = sum_j S_j(z) conj(S_j(w)) in the unitary
/// frames at z and w: (p+1) (1 + z conj(w))^p / ((1+|z|^2)(1+|w|^2))^{p/2}.
/// Assembled from the basis; finite points only.
complex bergman_kernel(int p, const ChartPoint& z, const ChartPoint& w);

} // namespace tzl
