#include "tzl/gaussian_sampler.hpp"

#include "tzl/bergman_basis.hpp"
#include "tzl/error.hpp"
#include "tzl/numeric.hpp"
#include "tzl/rng.hpp"

#include <algorithm>
#include <cmath>

namespace tzl {

namespace {

constexpr double kLn2 = 0.69314718055994530942;

// Per-point log factors of the unitary frame: for finite z,
//   log|z|^j - (p/2) log(1+|z|^2), phase j arg z;
// at infinity only j = p survives with log factor 0.
struct FrameFactors {
    double log_mod = 0.0;    // log|z|, -inf at z = 0
    double log_den = 0.0;    // (p/2) log(1+|z|^2)
    double arg = 0.0;
    bool infinity = false;

    FrameFactors(const ChartPoint& z, int p) {
        if (z.is_infinity()) {
            infinity = true;
            return;
        }
        const complex c = z.coord();
        const double m = std::abs(c);
        log_mod = m == 0.0 ? kNegInf : std::log(m);
        log_den = 0.5 * p * log1p_square(m);
        arg = std::arg(c);
    }

    double log_factor(int j, int p) const {
        if (infinity) return j == p ? 0.0 : kNegInf;
        if (j == 0) return -log_den;
        return j * log_mod - log_den;
    }
};

} // namespace

SectionSample sample_section(const ToeplitzSpectrum& spectrum, std::uint64_t seed,
                             std::uint64_t trial_index, const EtaOverride& eta_override) {
    const int p = spectrum.p;
    require(p >= 0 && p <= kMaxDegree, "sample_section: p must lie in [0, 500]");
    require(static_cast<int>(spectrum.log_lambdas.size()) == p + 1,
            "sample_section: spectrum has the wrong length");
    const bool all_zero = std::all_of(spectrum.log_lambdas.begin(), spectrum.log_lambdas.end(),
                                      [](double l) { return l == kNegInf; });
    require(!all_zero, "sample_section: all eigenvalues are zero");

    SectionSample s;
    s.p = p;
    s.seed = seed;
    s.trial_index = trial_index;
    s.truncation_threshold = kTruncationThreshold;

    std::vector<double> log_mag(p + 1);
    for (int j = 0; j <= p; ++j) log_mag[j] = spectrum.log_lambdas[j] + log_basis_norm_coeff(p, j);

    TrialStream stream(seed, trial_index);
    std::vector<complex> eta(p + 1);
    for (;;) {
        for (int j = 0; j <= p; ++j) eta[j] = eta_override ? eta_override(j) : stream.complex_gaussian();
        bool nonzero = false;
        for (int j = 0; j <= p; ++j)
            if (eta[j] != complex(0.0, 0.0) && log_mag[j] != kNegInf) nonzero = true;
        if (nonzero) break;
        require(!eta_override, "sample_section: override produced a zero section");
        ++s.resampled;
    }

    // Global power-of-two shift so that max |c_j| lies in (1/2, 1].
    double peak = kNegInf;
    for (int j = 0; j <= p; ++j)
        if (eta[j] != complex(0.0, 0.0)) peak = std::max(peak, log_mag[j] + std::log(std::abs(eta[j])));
    s.scale_exponent = -static_cast<int>(std::ceil(peak / kLn2));
    const double shift = s.scale_exponent * kLn2;

    s.coeffs.resize(p + 1);
    for (int j = 0; j <= p; ++j) {
        if (log_mag[j] == kNegInf || eta[j] == complex(0.0, 0.0)) {
            s.coeffs[j] = 0.0;
            continue;
        }
        const double log_abs = log_mag[j] + std::log(std::abs(eta[j])) + shift;
        if (log_abs < std::log(kTruncationThreshold)) {
            s.coeffs[j] = 0.0;
            s.truncated_tail = true;
            continue;
        }
        s.coeffs[j] = eta[j] * std::exp(log_mag[j] + shift);
    }
    return s;
}

KernelEvaluator::KernelEvaluator(const ToeplitzSpectrum& spectrum) : p_(spectrum.p) {
    log_w_.resize(p_ + 1);
    for (int j = 0; j <= p_; ++j) {
        const double ll = spectrum.log_lambdas[j];
        log_w_[j] = ll == kNegInf ? kNegInf : 2.0 * ll + 2.0 * log_basis_norm_coeff(p_, j);
    }
}

double KernelEvaluator::log_diag(const ChartPoint& z) const {
    const FrameFactors fz(z, p_);
    std::vector<double> terms(p_ + 1);
    for (int j = 0; j <= p_; ++j) terms[j] = log_w_[j] + 2.0 * fz.log_factor(j, p_);
    return log_sum_exp(terms);
}

double KernelEvaluator::log_normalized(const ChartPoint& z, const ChartPoint& w) const {
    if (z == w) return 0.0;
    const FrameFactors fz(z, p_);
    const FrameFactors fw(w, p_);
    std::vector<double> logs(p_ + 1);
    double peak = kNegInf;
    for (int j = 0; j <= p_; ++j) {
        logs[j] = log_w_[j] + fz.log_factor(j, p_) + fw.log_factor(j, p_);
        peak = std::max(peak, logs[j]);
    }
    const double ld_z = log_diag(z);
    const double ld_w = log_diag(w);
    require(ld_z != kNegInf && ld_w != kNegInf, "normalized_kernel: T^2 vanishes on the diagonal");
    if (peak == kNegInf) return kNegInf;
    // Phase of term j: j (arg z - arg w) in the unitary frames.
    const double dphi = (fz.infinity ? 0.0 : fz.arg) - (fw.infinity ? 0.0 : fw.arg);
    complex acc = 0.0;
    for (int j = 0; j <= p_; ++j) {
        if (logs[j] == kNegInf) continue;
        acc += std::polar(std::exp(logs[j] - peak), j * dphi);
    }
    const double log_abs = peak + std::log(std::abs(acc));
    return std::min(0.0, log_abs - 0.5 * (ld_z + ld_w));
}

double log_t2_diag(const ToeplitzSpectrum& spectrum, const ChartPoint& z) {
    return KernelEvaluator(spectrum).log_diag(z);
}

double t2_diag(const ToeplitzSpectrum& spectrum, const ChartPoint& z) {
    return std::exp(log_t2_diag(spectrum, z));
}

KernelValue normalized_kernel(const ToeplitzSpectrum& spectrum, const ChartPoint& z,
                              const ChartPoint& w) {
    const KernelEvaluator ev(spectrum);
    KernelValue kv;
    kv.z = z;
    kv.w = w;
    const double lz = ev.log_diag(z);
    const double lw = ev.log_diag(w);
    require(lz != kNegInf && lw != kNegInf, "normalized_kernel: T^2 vanishes on the diagonal");
    kv.t2_diag_z = std::exp(lz);
    kv.t2_diag_w = std::exp(lw);
    kv.log_normalized = ev.log_normalized(z, w);
    kv.normalized = std::clamp(std::exp(kv.log_normalized), 0.0, 1.0);
    kv.t2_offdiag_abs = std::exp(kv.log_normalized + 0.5 * (lz + lw));
    return kv;
}

KernelDecayReport kernel_gaussian_decay_check(const SymbolSpec& symbol, const ChartPoint& base,
                                              const std::vector<int>& p_list,
                                              const std::vector<double>& offsets,
                                              const std::vector<double>& directions, double far_b) {
    KernelDecayReport report;
    std::vector<double> fit_x, fit_y;
    for (int p : p_list) {
        require(p >= 2, "kernel_gaussian_decay_check: p must be >= 2");
        const auto spec = spectrum(p, symbol);
        const KernelEvaluator ev(spec);
        const double sp = std::sqrt(static_cast<double>(p));
        double worst_p = 0.0;
        for (double c : offsets) {
            for (double theta : directions) {
                const complex u = std::polar(c / sp, theta);
                const ChartPoint w = translate_from_origin(base, u);
                DecayRow row;
                row.p = p;
                row.offset = c;
                row.direction = theta;
                row.log_n = ev.log_normalized(base, w);
                const double at = std::atan(std::abs(u));
                row.model = 0.5 * p * at * at;
                row.ratio = -row.log_n / row.model;
                worst_p = std::max(worst_p, std::abs(row.ratio - 1.0));
                report.near.push_back(row);
            }
        }
        report.worst_near_deviation = std::max(report.worst_near_deviation, worst_p);
        if (worst_p > 0.0) {
            fit_x.push_back(std::log(static_cast<double>(p)));
            fit_y.push_back(std::log(worst_p));
        }

        FarFieldRow far;
        far.p = p;
        far.distance = far_b * std::sqrt(std::log(static_cast<double>(p)) / p);
        far.bound = 1.0 / (static_cast<double>(p) * p);
        if (far.distance < fs_diameter()) {
            const double rad = chart_radius_of_fs_norm(far.distance);
            double worst_far = kNegInf;
            for (double theta : directions) {
                const ChartPoint w = translate_from_origin(base, std::polar(rad, theta));
                worst_far = std::max(worst_far, ev.log_normalized(base, w));
            }
            far.log_n = worst_far;
            far.holds = far.log_n <= std::log(far.bound);
            report.far.push_back(far);
        }
    }
    if (fit_x.size() >= 2) {
        const double n = static_cast<double>(fit_x.size());
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < fit_x.size(); ++i) {
            sx += fit_x[i];
            sy += fit_y[i];
            sxx += fit_x[i] * fit_x[i];
            sxy += fit_x[i] * fit_y[i];
        }
        const double den = n * sxx - sx * sx;
        if (den != 0.0) report.remainder_exponent = (n * sxy - sx * sy) / den;
    }
    return report;
}

} // namespace tzl
