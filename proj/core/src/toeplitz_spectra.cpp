#include "tzl/toeplitz_spectra.hpp"

#include "tzl/bergman_basis.hpp"
#include "tzl/error.hpp"
#include "tzl/numeric.hpp"
#include "tzl/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace tzl {

namespace {

constexpr double kUnderflowThreshold = 1e-300;

void check_p(int p) {
    require(p >= 0 && p <= kMaxDegree,
            "degree p must lie in [0, " + std::to_string(kMaxDegree) + "]");
}

ToeplitzSpectrum make_spectrum(int p, const SymbolSpec& f, SpectrumMethod m,
                               std::vector<double> log_lambdas) {
    ToeplitzSpectrum s{p, {}, std::move(log_lambdas), f, m};
    s.lambdas.resize(s.log_lambdas.size());
    for (std::size_t j = 0; j < s.log_lambdas.size(); ++j) {
        s.lambdas[j] = std::exp(s.log_lambdas[j]);
        if (s.lambdas[j] < kUnderflowThreshold && s.log_lambdas[j] != kNegInf) s.underflow = true;
    }
    return s;
}

// Applies the symbol's amplitude to a spectrum computed for scale 1.
void apply_scale(ToeplitzSpectrum& s, double scale) {
    if (scale == 1.0) return;
    const double ls = scale > 0.0 ? std::log(scale) : kNegInf;
    for (std::size_t j = 0; j < s.lambdas.size(); ++j) {
        s.log_lambdas[j] = scale > 0.0 ? s.log_lambdas[j] + ls : kNegInf;
        s.lambdas[j] *= scale;
    }
}

// log of the Beta-type weight (p+1) C(p,j) u^j (1-u)^{p-j}.
double log_beta_weight(int p, int j, double u) {
    const double lu = j == 0 ? 0.0 : j * std::log(u);
    const double lv = p - j == 0 ? 0.0 : (p - j) * std::log1p(-u);
    return std::log(p + 1.0) + log_binomial(p, j) + lu + lv;
}

} // namespace

std::string to_string(SpectrumMethod m) {
    switch (m) {
    case SpectrumMethod::closed_form: return "closed_form";
    case SpectrumMethod::quadrature: return "quadrature";
    case SpectrumMethod::dense: return "dense";
    }
    return "unknown";
}

double ToeplitzSpectrum::min() const { return *std::min_element(lambdas.begin(), lambdas.end()); }
double ToeplitzSpectrum::max() const { return *std::max_element(lambdas.begin(), lambdas.end()); }

ToeplitzSpectrum spectrum_power(int p, int k) {
    check_p(p);
    require(k >= 1, "spectrum_power: k must be >= 1");
    std::vector<double> logs(p + 1);
    for (int j = 0; j <= p; ++j) {
        // prod_{i=1..k} (j+i)/(p+1+i), every factor <= 1.
        double acc = 0.0;
        for (int i = 1; i <= k; ++i) acc += std::log(static_cast<double>(j + i) / (p + 1 + i));
        logs[j] = acc;
    }
    auto s = make_spectrum(p, SymbolSpec::power_vanish(k), SpectrumMethod::closed_form, std::move(logs));
    // Exact product for the linear-scale values.
    for (int j = 0; j <= p; ++j) {
        double prod = 1.0;
        for (int i = 1; i <= k; ++i) prod *= static_cast<double>(j + i) / (p + 1 + i);
        s.lambdas[j] = prod;
    }
    return s;
}

ToeplitzSpectrum spectrum_indicator(int p, double r) {
    check_p(p);
    require(std::isfinite(r) && r > 0.0, "spectrum_indicator: r must be finite and positive");
    const double log_x = 2.0 * std::log(r) - std::log1p(r * r);  // log Vol
    const double log_1mx = -std::log1p(r * r);
    const int n = p + 1;
    std::vector<double> term(n + 1);
    for (int m = 0; m <= n; ++m)
        term[m] = log_binomial(n, m) + m * log_x + (n - m) * log_1mx;
    std::vector<double> logs(n);
    for (int j = 0; j <= p; ++j)
        logs[j] = log_sum_exp(std::span<const double>(term).subspan(j + 1));
    return make_spectrum(p, SymbolSpec::disc(r), SpectrumMethod::closed_form, std::move(logs));
}

ToeplitzSpectrum spectrum_expinv(int p, double rel_tol) {
    check_p(p);
    std::vector<double> logs(p + 1);
    double worst = 0.0;
    for (int j = 0; j <= p; ++j) {
        const double lgj = std::lgamma(j + 1.0);
        auto log_integrand = [p, j, lgj](double t) {
            const double l1 = std::log1p(t);
            return -t + (p + 1.0) * (std::log(t) - l1) + j * l1 - lgj;
        };
        // Mode of the integrand: t^2 + (1 - j) t - (p + 1) = 0.
        const double b = j - 1.0;
        const double mode = 0.5 * (b + std::sqrt(b * b + 4.0 * (p + 1.0)));
        const double peak = log_integrand(mode);
        const double width = std::sqrt(mode + 1.0);
        std::vector<double> bps;
        for (double c : {-8.0, -3.0, -1.0, 0.0, 1.0, 3.0, 8.0, 20.0}) {
            const double t = mode + c * width;
            if (t > 0.0) bps.push_back(t);
        }
        std::sort(bps.begin(), bps.end());
        const auto res = integrate_half_line(
            [&](double t) {
                if (t <= 0.0) return 0.0;
                return std::exp(log_integrand(t) - peak);
            },
            rel_tol, 0.0, bps);
        if (!res.converged)
            throw ConvergenceError("spectrum_expinv: quadrature did not converge for j = " +
                                       std::to_string(j),
                                   res.achieved_tol / std::max(res.value, 1e-300));
        worst = std::max(worst, res.achieved_tol / res.value);
        logs[j] = peak + std::log(res.value);
    }
    auto s = make_spectrum(p, SymbolSpec::exp_inverse(), SpectrumMethod::closed_form, std::move(logs));
    s.achieved_tol = worst;
    return s;
}

double expinv_lambda_max_alternating(int p) {
    check_p(p);
    // e E1(1) = int_0^inf e^{-t} / (1 + t) dt
    const double eE1 = integrate_half_line([](double t) { return std::exp(-t) / (1.0 + t); }, 1e-15).value;
    if (p == 0) return 1.0 - eE1;
    KahanSum acc;
    acc.add(1.0);
    double ratio = 1.0;  // (p-j)!/p!
    for (int j = 1; j <= p; ++j) {
        ratio /= (p - j + 1);
        acc.add((j % 2 == 0 ? 1.0 : -1.0) * ratio);
    }
    // ratio now equals 1/p!
    acc.add(((p + 1) % 2 == 0 ? 1.0 : -1.0) * ratio * eE1);
    return acc.value();
}

ToeplitzSpectrum spectrum_quadrature(int p, const SymbolSpec& f, double rel_tol) {
    check_p(p);
    require(f.is_radial(), "spectrum_quadrature: non-radial symbol (use toeplitz_matrix_general)");
    const auto sym_bps = f.volume_breakpoints();
    std::vector<double> logs(p + 1, kNegInf);
    double worst = 0.0;
    if (f.is_trivial()) return make_spectrum(p, f, SpectrumMethod::quadrature, std::move(logs));

    // Coarse scan of the integrand support: u where f(u) > 0.
    constexpr int kScan = 4096;
    std::vector<double> scan_u;
    std::vector<double> scan_logf;
    for (int i = 0; i <= kScan; ++i) {
        const double u = (i + 0.5) / (kScan + 1.0);
        const double v = f.value_at_volume(u);
        if (v > 0.0) {
            scan_u.push_back(u);
            scan_logf.push_back(std::log(v));
        }
    }
    for (double b : sym_bps) {
        for (double u : {b * (1 - 1e-12), b * (1 + 1e-12)}) {
            if (u <= 0.0 || u >= 1.0) continue;
            const double v = f.value_at_volume(u);
            if (v > 0.0) {
                scan_u.push_back(u);
                scan_logf.push_back(std::log(v));
            }
        }
    }

    std::vector<double> scan_lu(scan_u.size()), scan_lv(scan_u.size());
    for (std::size_t i = 0; i < scan_u.size(); ++i) {
        scan_lu[i] = std::log(scan_u[i]);
        scan_lv[i] = std::log1p(-scan_u[i]);
    }

    for (int j = 0; j <= p; ++j) {
        const double mode = p == 0 ? 0.5 : static_cast<double>(j) / p;
        const double sigma = std::sqrt((j + 1.0) * (p - j + 1.0) / ((p + 2.0) * (p + 2.0) * (p + 3.0)));
        // Scale: largest log(f w) on the scan and at the weight's mode.
        double peak = kNegInf;
        const double lc = std::log(p + 1.0) + log_binomial(p, j);
        for (std::size_t i = 0; i < scan_u.size(); ++i)
            peak = std::max(peak, scan_logf[i] + scan_lu[i] * j + scan_lv[i] * (p - j));
        peak += lc;
        if (mode > 0.0 && mode < 1.0) {
            const double v = f.value_at_volume(mode);
            if (v > 0.0) peak = std::max(peak, std::log(v) + log_beta_weight(p, j, mode));
        }
        if (peak == kNegInf) continue;

        std::vector<double> bps = sym_bps;
        for (double c : {-10.0, -4.0, -1.5, 0.0, 1.5, 4.0, 10.0}) {
            const double u = mode + c * sigma;
            if (u > 0.0 && u < 1.0) bps.push_back(u);
        }
        std::sort(bps.begin(), bps.end());
        bps.erase(std::unique(bps.begin(), bps.end()), bps.end());

        const auto res = integrate_interval(
            [&](double u) {
                if (u <= 0.0 || u >= 1.0) return 0.0;
                const double v = f.value_at_volume(u);
                if (v == 0.0) return 0.0;
                const double lu = j == 0 ? 0.0 : j * std::log(u);
                const double lv = p - j == 0 ? 0.0 : (p - j) * std::log1p(-u);
                return v * std::exp(lc + lu + lv - peak);
            },
            0.0, 1.0, rel_tol, 0.0, bps);
        if (!res.converged)
            throw ConvergenceError("spectrum_quadrature: no convergence for j = " + std::to_string(j),
                                   res.achieved_tol / std::max(res.value, 1e-300));
        if (res.value > 0.0) {
            logs[j] = peak + std::log(res.value);
            worst = std::max(worst, res.achieved_tol / res.value);
        }
    }
    auto s = make_spectrum(p, f, SpectrumMethod::quadrature, std::move(logs));
    s.achieved_tol = worst;
    return s;
}

ToeplitzSpectrum spectrum(int p, const SymbolSpec& f) {
    require(f.is_radial(), "spectrum: non-radial symbol (use toeplitz_matrix_general)");
    ToeplitzSpectrum out = std::visit(
        [&](const auto& v) -> ToeplitzSpectrum {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, symbols::Constant>) {
                check_p(p);
                auto s = make_spectrum(p, SymbolSpec::constant(1.0), SpectrumMethod::closed_form,
                                       std::vector<double>(p + 1, 0.0));
                apply_scale(s, v.c);
                return s;
            } else if constexpr (std::is_same_v<T, symbols::PowerVanish>) {
                return spectrum_power(p, v.k);
            } else if constexpr (std::is_same_v<T, symbols::ExpInverse>) {
                return spectrum_expinv(p);
            } else if constexpr (std::is_same_v<T, symbols::DiscIndicator>) {
                return spectrum_indicator(p, v.r);
            } else {
                return spectrum_quadrature(p, f.scaled(1.0 / std::max(f.scale(), 1e-300)));
            }
        },
        f.variant());
    if (f.scale() == 0.0) {
        for (auto& l : out.log_lambdas) l = kNegInf;
        for (auto& l : out.lambdas) l = 0.0;
    } else {
        apply_scale(out, f.scale());
    }
    out.symbol = f;
    return out;
}

DenseToeplitz toeplitz_matrix_general(int p, const SymbolSpec& f) {
    require(p >= 0 && p <= 100, "toeplitz_matrix_general: dense path supports p <= 100");
    const int n = p + 1;
    const int n_modes = 2 * p + 1;  // m = j - k in [-p, p]

    // Radial nodes: composite Gauss-Legendre over uniform panels plus breakpoints.
    std::vector<double> edges;
    constexpr int kPanels = 64;
    for (int i = 0; i <= kPanels; ++i) edges.push_back(static_cast<double>(i) / kPanels);
    // Profiles that are smooth in rho are only smooth in sqrt(u) at the
    // origin; grade the first panel geometrically.
    for (int i = 1; i <= 30; ++i) edges.push_back(std::ldexp(1.0 / kPanels, -i));
    for (double b : f.volume_breakpoints()) edges.push_back(b);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    const auto& rule = gauss_legendre_rule(24);
    std::vector<double> nodes, weights;
    for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
        const double a = edges[e], b = edges[e + 1];
        if (b <= a) continue;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            nodes.push_back(0.5 * (a + b) + 0.5 * (b - a) * rule.nodes[i]);
            weights.push_back(0.5 * (b - a) * rule.weights[i]);
        }
    }

    // Angular Fourier modes F_m(u) = (1/2pi) int f e^{i m theta} dtheta.
    const std::size_t n_nodes = nodes.size();
    std::vector<complex> modes(n_nodes * n_modes, complex(0.0, 0.0));
    const auto* grid = std::get_if<symbols::GeneralGrid>(&f.variant());
    for (std::size_t i = 0; i < n_nodes; ++i) {
        const double u = nodes[i];
        complex* F = &modes[i * n_modes];
        if (!grid) {
            F[p] = f.value_at_volume(u);
            continue;
        }
        const double rho = std::sqrt(u / (1.0 - u));
        const int na = grid->n_angles;
        const double h = 2.0 * kPi / na;
        std::vector<double> ring(na);
        for (int a = 0; a < na; ++a)
            ring[a] = f.value(ChartPoint::finite(std::polar(rho, a * h)));
        for (int m = -p; m <= p; ++m) {
            complex acc = 0.0;
            for (int a = 0; a < na; ++a) {
                const double fa = ring[a];
                const double fb = ring[(a + 1) % na];
                const double slope = (fb - fa) / h;
                if (m == 0) {
                    acc += 0.5 * h * (fa + fb);
                    continue;
                }
                // int_0^h (fa + slope s) e^{i m (theta_a + s)} ds, exactly.
                const complex im(0.0, m);
                const complex e_h = std::exp(im * h);
                const complex i0 = (e_h - 1.0) / im;
                const complex i1 = h * e_h / im - (e_h - 1.0) / (im * im);
                acc += std::exp(im * (a * h)) * (fa * i0 + slope * i1);
            }
            F[m + p] = acc / (2.0 * kPi);
        }
    }

    std::vector<double> log_a(n);
    for (int j = 0; j < n; ++j) log_a[j] = log_basis_norm_coeff(p, j);
    std::vector<double> log_u(n_nodes), log_v(n_nodes);
    for (std::size_t i = 0; i < n_nodes; ++i) {
        log_u[i] = std::log(nodes[i]);
        log_v[i] = std::log1p(-nodes[i]);
    }

    ComplexMatrix h(n);
    for (int k = 0; k < n; ++k) {
        for (int j = k; j < n; ++j) {
            const int m = j - k;
            const double s = 0.5 * (j + k);
            complex acc = 0.0;
            for (std::size_t i = 0; i < n_nodes; ++i) {
                const complex Fm = modes[i * n_modes + (m + p)];
                if (Fm == complex(0.0, 0.0)) continue;
                acc += weights[i] * Fm * std::exp(log_a[j] + log_a[k] + s * log_u[i] + (p - s) * log_v[i]);
            }
            h(k, j) = acc;
            h(j, k) = std::conj(acc);
        }
    }

    auto eig = jacobi_eigen_hermitian(h);
    std::vector<double> logs(n);
    for (int i = 0; i < n; ++i) logs[i] = eig.values[i] > 0.0 ? std::log(eig.values[i]) : kNegInf;
    auto spec = make_spectrum(p, f, SpectrumMethod::dense, std::move(logs));
    spec.lambdas = eig.values;
    return {std::move(h), std::move(spec)};
}

SpectralSummary spectral_summary(const ToeplitzSpectrum& s) {
    SpectralSummary out;
    out.min = s.min();
    out.max = s.max();
    std::vector<double> sorted = s.lambdas;
    std::sort(sorted.begin(), sorted.end());
    out.trace = pairwise_sum(sorted);
    out.trace_target = (s.p + 1.0) * s.symbol.integral();
    return out;
}

std::vector<MinEigRow> min_eig_asymptotics(const SymbolSpec& symbol, const std::vector<int>& p_list) {
    std::vector<MinEigRow> rows;
    for (int p : p_list) {
        MinEigRow row;
        row.p = p;
        std::visit(
            [&](const auto& v) {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, symbols::PowerVanish>) {
                    require(p >= 1, "min_eig_asymptotics: PowerVanish needs p >= 1");
                    const auto s = spectrum(p, symbol);
                    row.lambda_min = s.lambdas[0];
                    row.log_lambda_min = s.log_lambdas[0];
                    const double scaled =
                        std::exp(row.log_lambda_min + v.k * std::log(p) - std::lgamma(v.k + 1.0) -
                                 std::log(symbol.scale()));
                    row.statistic = scaled - (1.0 + v.k * (v.k + 3.0) / (2.0 * p));
                    row.corrected_statistic = scaled - (1.0 - v.k * (v.k + 3.0) / (2.0 * p));
                } else if constexpr (std::is_same_v<T, symbols::ExpInverse>) {
                    require(p >= 1, "min_eig_asymptotics: ExpInverse needs p >= 1");
                    const auto s = spectrum(p, symbol);
                    row.lambda_min = s.lambdas[0];
                    row.log_lambda_min = s.log_lambdas[0] - std::log(symbol.scale());
                    const double sp = std::sqrt(static_cast<double>(p));
                    row.statistic = -row.log_lambda_min / sp;
                    row.lower_bound_holds = row.log_lambda_min >= -2.0 * sp - 1.0 / sp;
                } else if constexpr (std::is_same_v<T, symbols::DiscIndicator>) {
                    const auto s = spectrum(p, symbol);
                    row.lambda_min = s.lambdas[p];
                    row.log_lambda_min = s.log_lambdas[p];
                    const double log_vol = std::log(disc_volume(v.r));
                    row.statistic =
                        std::exp(row.log_lambda_min - std::log(symbol.scale()) - (p + 1.0) * log_vol);
                } else {
                    throw PreconditionError(
                        "min_eig_asymptotics: symbol must be PowerVanish, ExpInverse or DiscIndicator");
                }
            },
            symbol.variant());
        rows.push_back(row);
    }
    return rows;
}

namespace {

// f1 <= f2 on a sample grid including both symbols' breakpoints.
bool pointwise_ordered(const SymbolSpec& f1, const SymbolSpec& f2) {
    constexpr double kSlack = 1e-14;
    if (f1.is_radial() && f2.is_radial()) {
        std::vector<double> us;
        constexpr int kGrid = 4000;
        for (int i = 0; i <= kGrid; ++i) us.push_back(static_cast<double>(i) / kGrid);
        for (const auto* f : {&f1, &f2})
            for (double b : f->volume_breakpoints())
                for (double d : {-1e-9, 0.0, 1e-9})
                    if (b + d >= 0.0 && b + d <= 1.0) us.push_back(b + d);
        for (double u : us)
            if (f1.value_at_volume(u) > f2.value_at_volume(u) + kSlack) return false;
        return true;
    }
    constexpr int kRadii = 400;
    constexpr int kAngles = 256;
    for (int i = 0; i <= kRadii; ++i) {
        const double u = std::min(static_cast<double>(i) / kRadii, 1.0 - 1e-12);
        const double rho = std::sqrt(u / (1.0 - u));
        for (int a = 0; a < kAngles; ++a) {
            const auto z = ChartPoint::finite(std::polar(rho, 2.0 * kPi * a / kAngles));
            if (f1.value(z) > f2.value(z) + kSlack) return false;
        }
    }
    return true;
}

std::vector<double> sorted_spectrum(int p, const SymbolSpec& f) {
    std::vector<double> v = f.is_radial() ? spectrum(p, f).lambdas
                                          : toeplitz_matrix_general(p, f).spectrum.lambdas;
    std::sort(v.begin(), v.end());
    return v;
}

} // namespace

WeylReport weyl_monotonicity_check(const SymbolSpec& f1, const SymbolSpec& f2, int p, double slack) {
    require(pointwise_ordered(f1, f2), "weyl_monotonicity_check: symbols are not pointwise ordered");
    WeylReport r;
    r.sorted1 = sorted_spectrum(p, f1);
    r.sorted2 = sorted_spectrum(p, f2);
    r.worst_gap = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < r.sorted1.size(); ++j)
        r.worst_gap = std::max(r.worst_gap, r.sorted1[j] - r.sorted2[j]);
    r.dominated = r.worst_gap <= slack;
    return r;
}

std::vector<SpectralCdfRow> spectral_cdf_compare(const SymbolSpec& symbol, int p,
                                                 const std::vector<double>& thresholds) {
    require(symbol.is_radial(), "spectral_cdf_compare: symbol must be radial");
    const auto s = spectrum(p, symbol);
    const double sup = symbol.sup_norm();
    std::vector<SpectralCdfRow> rows;
    for (double a : thresholds) {
        require(a > 0.0 && a <= sup, "spectral_cdf_compare: thresholds must lie in (0, sup f]");
        SpectralCdfRow row;
        row.threshold = a;
        const auto above = std::count_if(s.lambdas.begin(), s.lambdas.end(), [a](double l) { return l > a; });
        row.fraction_above = static_cast<double>(above) / (p + 1.0);
        row.limit_volume = symbol.superlevel_volume(a);
        rows.push_back(row);
    }
    return rows;
}

} // namespace tzl
