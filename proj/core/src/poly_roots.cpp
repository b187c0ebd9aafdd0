#include "tzl/poly_roots.hpp"

#include "tzl/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tzl {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Eval {
    complex newton;        // q(z) / q'(z)
    double backward = 0.0; // |q(z)| / sum |q_j| |z|^j
    bool exact = false;    // q(z) == 0
};

// q(z) = sum_{j=0}^n q[j] z^j, n >= 1. For |z| > 1 the reversed polynomial
// r(y) = sum_j q[n-j] y^j, y = 1/z, keeps every term bounded.
// aq[j] = |q[j]|, precomputed by the caller.
Eval evaluate(std::span<const complex> q, std::span<const double> aq, complex z) {
    const int n = static_cast<int>(q.size()) - 1;
    Eval e;
    // Horner for the value and first derivative in real arithmetic.
    const bool inside = std::abs(z) <= 1.0;
    const complex x = inside ? z : 1.0 / z;
    const double xr = x.real(), xi = x.imag(), ax = std::abs(x);
    auto coeff = [&](int k) -> const complex& { return inside ? q[n - k] : q[k]; };
    auto acoeff = [&](int k) { return inside ? aq[n - k] : aq[k]; };
    double vr = coeff(0).real(), vi = coeff(0).imag(), dr = 0.0, di = 0.0;
    double scale = acoeff(0);
    for (int k = 1; k <= n; ++k) {
        const double ndr = dr * xr - di * xi + vr, ndi = dr * xi + di * xr + vi;
        dr = ndr;
        di = ndi;
        const complex& c = coeff(k);
        const double nvr = vr * xr - vi * xi + c.real(), nvi = vr * xi + vi * xr + c.imag();
        vr = nvr;
        vi = nvi;
        scale = scale * ax + acoeff(k);
    }
    const complex v(vr, vi), d(dr, di);
    e.exact = v == complex(0.0, 0.0);
    e.backward = std::abs(v) / scale;
    if (e.exact) return e;
    if (inside) {
        e.newton = v / d;
    } else {
        // Reversed polynomial r(y), y = 1/z: q/q' = z r / (n r - y r') = 1 / (y (n - y r'/r)).
        e.newton = 1.0 / (x * (static_cast<double>(n) - x * d / v));
    }
    return e;
}

// Initial iterates from the upper convex hull of (j, log|q_j|): each hull
// edge (a, b) contributes b - a points on the circle of radius
// (|q_a| / |q_b|)^{1/(b-a)}.
std::vector<complex> initial_guesses(std::span<const complex> q, bool conjugate) {
    const int n = static_cast<int>(q.size()) - 1;
    std::vector<int> idx;
    std::vector<double> lg(n + 1, kNegInf);
    for (int j = 0; j <= n; ++j)
        if (q[j] != complex(0.0, 0.0)) lg[j] = std::log(std::abs(q[j]));
    for (int j = 0; j <= n; ++j) {
        if (lg[j] == kNegInf) continue;
        while (idx.size() >= 2) {
            const int a = idx[idx.size() - 2], b = idx.back();
            // Drop b if it lies on or below the chord a -> j.
            if ((lg[b] - lg[a]) * (j - a) <= (lg[j] - lg[a]) * (b - a))
                idx.pop_back();
            else
                break;
        }
        idx.push_back(j);
    }
    std::vector<complex> z;
    z.reserve(n);
    const double sign = conjugate ? -1.0 : 1.0;
    for (std::size_t e = 0; e + 1 < idx.size(); ++e) {
        const int a = idx[e], b = idx[e + 1];
        const int m = b - a;
        const double radius = std::exp((lg[a] - lg[b]) / m);
        for (int i = 0; i < m; ++i) {
            const double theta = 2.0 * kPi * i / m + 2.0 * kPi * static_cast<double>(e) / n + 0.4;
            z.push_back(std::polar(radius, sign * theta));
        }
    }
    return z;
}

// Aberth-Ehrlich with Gauss-Seidel updates on a polynomial with nonzero
// constant and leading coefficients, degree n >= 1.
std::vector<complex> aberth(std::span<const complex> q, const AberthOptions& opt, int& sweeps,
                            double& worst_update, bool& converged) {
    const int n = static_cast<int>(q.size()) - 1;
    if (n == 1) {
        sweeps = 0;
        worst_update = 0.0;
        converged = true;
        return {-q[0] / q[1]};
    }
    std::vector<complex> z = initial_guesses(q, opt.conjugate_phases);
    std::vector<double> aq(q.size());
    for (std::size_t j = 0; j < q.size(); ++j) aq[j] = std::abs(q[j]);
    std::vector<char> done(n, 0);
    converged = false;
    worst_update = std::numeric_limits<double>::infinity();
    for (sweeps = 1; sweeps <= opt.max_sweeps; ++sweeps) {
        worst_update = 0.0;
        bool all_done = true;
        for (int i = 0; i < n; ++i) {
            if (done[i]) continue;
            const Eval e = evaluate(q, aq, z[i]);
            complex w = 0.0;
            if (!e.exact) {
                // sum_{k != i} 1 / (z_i - z_k), without the checked complex division.
                double sr = 0.0, si = 0.0;
                const double xr = z[i].real(), xi = z[i].imag();
                for (int k = 0; k < n; ++k) {
                    if (k == i) continue;
                    const double dr = xr - z[k].real(), di = xi - z[k].imag();
                    const double inv = 1.0 / (dr * dr + di * di);
                    sr += dr * inv;
                    si -= di * inv;
                }
                const complex s(sr, si);
                w = e.newton / (1.0 - e.newton * s);
                if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) w = e.newton;
                if (!std::isfinite(w.real()) || !std::isfinite(w.imag()))
                    w = std::polar(1e-8 * (1.0 + std::abs(z[i])), 1.0 + i);
            }
            z[i] -= w;
            const double rel = std::abs(w) / (1.0 + std::abs(z[i]));
            worst_update = std::max(worst_update, rel);
            // Stop a root once its step is below tolerance, or once it was
            // already backward stable before the step (rounding floor).
            if (e.exact || rel <= opt.update_tol || e.backward <= 4.0 * n * kEps)
                done[i] = 1;
            else
                all_done = false;
        }
        if (all_done) {
            converged = true;
            break;
        }
    }
    sweeps = std::min(sweeps, opt.max_sweeps);
    return z;
}

} // namespace

ZeroSet find_roots(std::span<const complex> coeffs, const AberthOptions& options) {
    require(!coeffs.empty(), "find_roots: empty coefficient vector");
    const int p = static_cast<int>(coeffs.size()) - 1;
    for (const auto& c : coeffs)
        require(std::isfinite(c.real()) && std::isfinite(c.imag()), "find_roots: non-finite coefficient");
    int lo = 0;
    while (lo <= p && coeffs[lo] == complex(0.0, 0.0)) ++lo;
    require(lo <= p, "find_roots: zero section has no divisor");
    int hi = p;
    while (coeffs[hi] == complex(0.0, 0.0)) --hi;

    ZeroSet zs;
    zs.p = p;
    zs.mult_infinity = p - hi;
    zs.roots.assign(lo, complex(0.0, 0.0));

    bool converged = true;
    double worst = 0.0;
    if (hi > lo) {
        const auto q = coeffs.subspan(lo, hi - lo + 1);
        auto z = aberth(q, options, zs.sweeps, worst, converged);
        zs.roots.insert(zs.roots.end(), z.begin(), z.end());
    }
    zs.near_infinity.resize(zs.roots.size());
    for (std::size_t i = 0; i < zs.roots.size(); ++i)
        zs.near_infinity[i] = std::abs(zs.roots[i]) > kNearInfinityModulus;
    zs.residual_max = residual_check(coeffs, zs).residual_max;
    if (!converged)
        throw RootFindingError("find_roots: Aberth iteration did not converge within " +
                                   std::to_string(options.max_sweeps) + " sweeps",
                               worst, zs);
    return zs;
}

ZeroSet find_roots(const SectionSample& sample) {
    ZeroSet zs;
    try {
        zs = find_roots(sample.coeffs);
    } catch (const RootFindingError&) {
        AberthOptions retry;
        retry.conjugate_phases = true;
        zs = find_roots(sample.coeffs, retry);
    }
    zs.truncated_tail = sample.truncated_tail;
    return zs;
}

ResidualReport residual_check(std::span<const complex> coeffs, const ZeroSet& zeros) {
    ResidualReport rep;
    const int p = static_cast<int>(coeffs.size()) - 1;
    std::vector<double> ac(coeffs.size());
    for (std::size_t j = 0; j < coeffs.size(); ++j) ac[j] = std::abs(coeffs[j]);
    for (const complex& z : zeros.roots) {
        if (z == complex(0.0, 0.0)) {
            // Exact by construction when c_0 = 0.
            rep.residual_max = std::max(rep.residual_max, std::abs(coeffs[0]) == 0.0 ? 0.0 : 1.0);
            continue;
        }
        if (p == 0) continue;
        rep.residual_max = std::max(rep.residual_max, evaluate(coeffs, ac, z).backward);
    }
    const int d = p - zeros.mult_infinity;
    if (zeros.mult_infinity == 0 && p >= 1 && d >= 1) {
        const complex target = -coeffs[d - 1] / coeffs[d];
        complex sum = 0.0;
        double mag = std::abs(target);
        for (const complex& z : zeros.roots) {
            sum += z;
            mag += std::abs(z);
        }
        rep.vieta_checked = true;
        rep.vieta_error = mag > 0.0 ? std::abs(sum - target) / mag : 0.0;
        rep.vieta_ok = rep.vieta_error <= 1e-8;
    }
    return rep;
}

ResidualReport residual_check(const SectionSample& sample, const ZeroSet& zeros) {
    return residual_check(sample.coeffs, zeros);
}

std::vector<CoalescedRoot> coalesce_multiplicities(const ZeroSet& zeros, double rel_tol) {
    std::vector<CoalescedRoot> out;
    std::vector<char> used(zeros.roots.size(), 0);
    for (std::size_t i = 0; i < zeros.roots.size(); ++i) {
        if (used[i]) continue;
        CoalescedRoot c{zeros.roots[i], 1};
        used[i] = 1;
        const double tol = rel_tol * std::max(1.0, std::abs(zeros.roots[i]));
        for (std::size_t k = i + 1; k < zeros.roots.size(); ++k) {
            if (!used[k] && std::abs(zeros.roots[k] - zeros.roots[i]) < tol) {
                used[k] = 1;
                ++c.multiplicity;
            }
        }
        out.push_back(c);
    }
    return out;
}

} // namespace tzl
