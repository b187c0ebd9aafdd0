#pragma once

// Zeros of a sampled section s(z) = sum_j c_j z^j of O(p) on CP^1, as a
// divisor: finite roots (repeated by multiplicity) plus the order at
// infinity, p - deg s.

#include "tzl/error.hpp"
#include "tzl/fs_geometry.hpp"
#include "tzl/gaussian_sampler.hpp"

#include <span>
#include <vector>

namespace tzl {

/// Roots beyond this modulus are flagged for histogram binning.
inline constexpr double kNearInfinityModulus = 1e8;

struct ZeroSet {
    int p = 0;
    std::vector<complex> roots;
    int mult_infinity = 0;
    double residual_max = 0.0;
    std::vector<bool> near_infinity;  // parallel to roots
    bool truncated_tail = false;
    int sweeps = 0;

    int total() const noexcept { return static_cast<int>(roots.size()) + mult_infinity; }
};

struct AberthOptions {
    int max_sweeps = 500;
    double update_tol = 1e-13;  // |update| <= tol (1 + |z|)
    /// Mirror the initial phases (restart strategy after a failure).
    bool conjugate_phases = false;
};

/// Aberth-Ehrlich failure; carries the partial iterate.
class RootFindingError : public ConvergenceError {
public:
    RootFindingError(const std::string& what, double achieved, ZeroSet partial)
        : ConvergenceError(what, achieved), partial_(std::move(partial)) {}
    const ZeroSet& partial() const noexcept { return partial_; }

private:
    ZeroSet partial_;
};

/// Roots of sum_j coeffs[j] z^j viewed as a section of O(p),
/// p = coeffs.size() - 1. Exactly-zero trailing coefficients give exact
/// roots at 0; exactly-zero leading ones give multiplicity at infinity.
ZeroSet find_roots(std::span<const complex> coeffs, const AberthOptions& options = {});

/// As above; on failure retries once with conjugated initial phases.
ZeroSet find_roots(const SectionSample& sample);

struct ResidualReport {
    /// max over roots of |s(z)| / sum_j |c_j| |z|^j.
    double residual_max = 0.0;
    /// |sum roots + c_{d-1}/c_d| / (sum |roots| + |c_{d-1}/c_d|); only when
    /// mult_infinity = 0 and p >= 1.
    double vieta_error = 0.0;
    bool vieta_checked = false;
    bool vieta_ok = true;  // vieta_error <= 1e-8
};

ResidualReport residual_check(std::span<const complex> coeffs, const ZeroSet& zeros);
ResidualReport residual_check(const SectionSample& sample, const ZeroSet& zeros);

struct CoalescedRoot {
    complex root;
    int multiplicity = 1;
};

/// Groups roots closer than rel_tol * max(1, |z|) (reporting only).
std::vector<CoalescedRoot> coalesce_multiplicities(const ZeroSet& zeros, double rel_tol = 1e-9);

} // namespace tzl
