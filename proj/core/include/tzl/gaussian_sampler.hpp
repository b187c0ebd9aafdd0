#pragma once

// Gaussian random sections S_{f,p} = T_{f,p} S_p of O(p) on CP^1:
//   S_{f,p}(z) = sum_j eta_j lambda_j sqrt((p+1) C(p,j)) z^j,
// eta_j i.i.d. standard complex Gaussians, together with the covariance
// kernel T^2_{f,p}(z, w) = sum_j lambda_j^2 S_j(z) conj(S_j(w)) and its
// normalized modulus N_{f,p}.

#include "tzl/fs_geometry.hpp"
#include "tzl/toeplitz_spectra.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace tzl {

struct SectionSample {
    int p = 0;
    /// Stored coefficients; the true section is coeffs * 2^{-scale_exponent}.
    std::vector<complex> coeffs;
    int scale_exponent = 0;
    std::uint64_t seed = 0;
    std::uint64_t trial_index = 0;
    /// Coefficients below the threshold after rescaling were set to zero.
    bool truncated_tail = false;
    double truncation_threshold = 0.0;
    /// Zero draws rejected before this sample (practically always 0).
    int resampled = 0;
};

/// Coefficients with |c_j| below this after rescaling are truncated to 0.
inline constexpr double kTruncationThreshold = 1e-300;

/// Test hook: supplies eta_j instead of the random stream.
using EtaOverride = std::function<complex(int j)>;

SectionSample sample_section(const ToeplitzSpectrum& spectrum, std::uint64_t seed,
                             std::uint64_t trial_index, const EtaOverride& eta_override = {});

/// log T^2_{f,p}(z, z) = log E |S_{f,p}(z)|^2_{h_p}.
double log_t2_diag(const ToeplitzSpectrum& spectrum, const ChartPoint& z);
double t2_diag(const ToeplitzSpectrum& spectrum, const ChartPoint& z);

struct KernelValue {
    ChartPoint z;
    ChartPoint w;
    double t2_diag_z = 0.0;
    double t2_diag_w = 0.0;
    double t2_offdiag_abs = 0.0;
    double normalized = 0.0;
    /// log of `normalized`; stays finite deep in the off-diagonal tail.
    double log_normalized = 0.0;
};

/// N_{f,p}(z, w) = |T^2(z, w)| / sqrt(T^2(z, z) T^2(w, w)). Throws
/// PreconditionError (domain error) if a diagonal value vanishes.
KernelValue normalized_kernel(const ToeplitzSpectrum& spectrum, const ChartPoint& z,
                              const ChartPoint& w);

/// Precomputed log(lambda_j^2 (p+1) C(p, j)) for repeated kernel evaluation.
class KernelEvaluator {
public:
    explicit KernelEvaluator(const ToeplitzSpectrum& spectrum);

    int p() const noexcept { return p_; }
    double log_diag(const ChartPoint& z) const;
    /// log N(z, w).
    double log_normalized(const ChartPoint& z, const ChartPoint& w) const;
    /// Weights log(lambda_j^2 a_j^2), j = 0..p.
    std::span<const double> log_weights() const noexcept { return log_w_; }

private:
    int p_;
    std::vector<double> log_w_;
};

struct DecayRow {
    int p = 0;
    double offset = 0.0;      // c, with |u| = c / sqrt(p)
    double direction = 0.0;   // angle of u
    double log_n = 0.0;       // log N(z, w)
    double model = 0.0;       // (p/2) arctan^2 |u| = (p/4) Phi^2
    double ratio = 0.0;       // -log N / model
};

struct FarFieldRow {
    int p = 0;
    double distance = 0.0;    // b sqrt(log p / p)
    double log_n = 0.0;
    double bound = 0.0;       // p^{-2}
    bool holds = false;
};

struct KernelDecayReport {
    std::vector<DecayRow> near;
    std::vector<FarFieldRow> far;
    double worst_near_deviation = 0.0;  // max |ratio - 1|
    /// Least-squares slope of log max|ratio-1| against log p (remainder
    /// exponent); empty with fewer than two usable p values.
    std::optional<double> remainder_exponent;
};

/// Near-diagonal Gaussian decay and far-field smallness of N_{f,p} around
/// `base`. Points are placed with the SU(2) isometry taking 0 to base, so
/// dist(base, w) = arctan(c / sqrt p) / sqrt(pi) exactly.
KernelDecayReport kernel_gaussian_decay_check(const SymbolSpec& symbol, const ChartPoint& base,
                                              const std::vector<int>& p_list,
                                              const std::vector<double>& offsets,
                                              const std::vector<double>& directions = {0.0},
                                              double far_b = 2.0);

} // namespace tzl
