#pragma once

// Number variance of linear statistics Z(phi):
//   Var Z(phi) = int int L(phi)(z) L(phi)(w) G(N(z, w)) omega(z) omega(w),
//   G(t) = Li2(t^2) / (4 pi^2) = sum_{j>=1} t^{2j} / (4 pi^2 j^2),
// and its large-p limit  p Var -> zeta(3)/(4 pi^2) int |L(phi)|^2 omega.

#include "tzl/test_function.hpp"
#include "tzl/toeplitz_spectra.hpp"

namespace tzl {

/// G(t) for t in [0, 1]; G(0) = 0, G(1) = 1/24.
double bipotential_g(double t);

struct VarianceOptions {
    /// Radial panel width in u is panel_scale / sqrt(p) (capped at 1/16).
    double panel_scale = 0.25;
    int panel_order = 10;
    /// Angular samples; 0 picks max(512, next power of two >= 8 (p+1)).
    int angles = 0;
    int threads = 1;
};

struct VarianceResult {
    double value = 0.0;
    /// |value - value with half the radial resolution|.
    double achieved_tol = 0.0;
    int radial_nodes = 0;
    int angles = 0;
};

/// Radial phi and radial spectrum.
VarianceResult variance_bipotential(const ToeplitzSpectrum& spectrum, const TestFunction& phi,
                                    const VarianceOptions& options = {});

/// zeta(3)/(4 pi^2) int |L(phi)|^2 omega_FS.
double variance_leading_term(const TestFunction& phi);

} // namespace tzl
