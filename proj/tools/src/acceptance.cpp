#include "tzl_cli/acceptance.hpp"

#include "tzl_cli/commands.hpp"
#include "tzl_cli/io.hpp"

#include "tzl/error.hpp"
#include "tzl/gaussian_sampler.hpp"
#include "tzl/numeric.hpp"
#include "tzl/parallel.hpp"
#include "tzl/poly_roots.hpp"
#include "tzl/rng.hpp"
#include "tzl/variance.hpp"
#include "tzl/zero_statistics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <sstream>
#include <unistd.h>

namespace tzl::cli {

namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

double rel_log_error(double la, double lb) {
    if (la == lb) return 0.0;
    return std::abs(std::expm1(la - lb));
}

const std::vector<SymbolSpec>& radial_builtins() {
    static const std::vector<SymbolSpec> s{
        SymbolSpec::constant(1.0),   SymbolSpec::constant(2.5),   SymbolSpec::power_vanish(1),
        SymbolSpec::power_vanish(2), SymbolSpec::power_vanish(3), SymbolSpec::exp_inverse(),
        SymbolSpec::disc(0.25),      SymbolSpec::disc(1.0),       SymbolSpec::disc(2.0),
        SymbolSpec(symbols::RadialTabulated{{0.0, 0.5, 1.0, 2.0, 4.0}, {1.0, 0.6, 0.9, 0.2, 0.4}})};
    return s;
}

double sample_mean_se(const std::vector<double>& z, double& se) {
    KahanSum s;
    for (double v : z) s.add(v);
    const double mean = s.value() / z.size();
    KahanSum q;
    for (double v : z) q.add((v - mean) * (v - mean));
    se = std::sqrt(q.value() / (z.size() - 1.0) / z.size());
    return mean;
}

CriterionResult c01() {
    CriterionResult r{1, "spectrum exactness", true, {}, 0.0};
    const auto t0 = Clock::now();
    double worst_power = 0.0, worst_disc = 0.0, worst_disc_100 = 0.0;
    for (int p = 0; p <= 100; ++p) {
        for (int k = 1; k <= 3; ++k) {
            const auto a = spectrum_power(p, k);
            const auto b = spectrum_quadrature(p, SymbolSpec::power_vanish(k));
            for (int j = 0; j <= p; ++j) worst_power = std::max(worst_power, rel_log_error(a.log_lambdas[j], b.log_lambdas[j]));
        }
        for (double rad : {0.5, 1.0, 2.0}) {
            const auto a = spectrum_indicator(p, rad);
            const auto b = spectrum_quadrature(p, SymbolSpec::disc(rad));
            double& w = p == 100 ? worst_disc_100 : worst_disc;
            for (int j = 0; j <= p; ++j) w = std::max(w, rel_log_error(a.log_lambdas[j], b.log_lambdas[j]));
        }
    }
    const double secs = seconds_since(t0);
    const auto d1 = spectrum_indicator(1, 1.0);
    const bool points = std::abs(d1.lambdas[0] - 0.75) <= 1e-15 && std::abs(d1.lambdas[1] - 0.25) <= 1e-15 &&
                        std::abs(spectrum_indicator(3, 1.0).min() - 1.0 / 16.0) <= 1e-16 &&
                        std::abs(spectrum_power(1, 1).min() - 1.0 / 3.0) <= 1e-16;
    r.passed = worst_power <= 1e-10 && worst_disc <= 1e-10 && worst_disc_100 <= 1e-8 && secs < 10.0 && points;
    r.detail = "max rel err f_k " + fmt("%.2e", worst_power) + ", 1_r p<100 " + fmt("%.2e", worst_disc) +
               ", 1_r p=100 " + fmt("%.2e", worst_disc_100) + ", runtime " + fmt("%.2f", secs) +
               " s (< 10), point values " + (points ? "ok" : "WRONG");
    return r;
}

CriterionResult c03() {
    CriterionResult r{3, "minimum eigenvalue of f_k", true, {}, 0.0};
    const auto t0 = Clock::now();
    std::vector<int> ps;
    for (int p = 50; p <= 400; ++p) ps.push_back(p);
    const double second[] = {0.0, 4.0, 19.0, 55.0};
    std::ostringstream os;
    for (int k = 1; k <= 3; ++k) {
        double worst = 0.0, worst_corr = 0.0;
        int worst_p = 0;
        for (const auto& row : min_eig_asymptotics(SymbolSpec::power_vanish(k), ps)) {
            const double scaled = std::abs(row.statistic) * row.p * row.p;
            if (scaled > worst) {
                worst = scaled;
                worst_p = row.p;
            }
            worst_corr = std::max(worst_corr, std::abs(*row.corrected_statistic) * row.p * row.p);
            if (std::abs(row.statistic) > 5.0 / (double(row.p) * row.p)) r.passed = false;
        }
        os << "k=" << k << ": max p^2|dev| " << fmt("%.4g", worst) << " at p=" << worst_p
           << " (bound 5); with 1 - k(k+3)/(2p) " << fmt("%.4g", worst_corr) << " (C_k=" << second[k] << "); ";
    }
    const double secs = seconds_since(t0);
    if (secs >= 1.0) r.passed = false;
    os << "runtime " << fmt("%.3f", secs) << " s";
    r.detail = os.str();
    return r;
}

CriterionResult c04() {
    CriterionResult r{4, "minimum eigenvalue of exp(-1/|z|^2)", true, {}, 0.0};
    const auto t0 = Clock::now();
    std::ostringstream os;
    for (const auto& row : min_eig_asymptotics(SymbolSpec::exp_inverse(), {64, 100, 196, 400})) {
        const bool ok = row.lower_bound_holds.value() && row.statistic >= 1.8 && row.statistic <= 2.2;
        r.passed = r.passed && ok;
        os << "p=" << row.p << ": -log(lmin)/sqrt(p) " << fmt("%.4f", row.statistic) << " bound "
           << (*row.lower_bound_holds ? "ok" : "FAILS") << "; ";
    }
    const double secs = seconds_since(t0);
    if (secs >= 30.0) r.passed = false;
    os << "runtime " << fmt("%.2f", secs) << " s (window [1.8, 2.2])";
    r.detail = os.str();
    return r;
}

CriterionResult c05() {
    CriterionResult r{5, "Weyl monotonicity", true, {}, 0.0};
    Xoshiro256ss rng(0x5eed0005);
    auto uni = [&] { return rng.uniform_open0(); };
    int checked = 0, failed = 0;
    double worst = -INFINITY;
    for (int i = 0; i < 200; ++i) {
        const int p = 1 + static_cast<int>(uni() * 60.0) % 60;
        SymbolSpec f1 = SymbolSpec::constant(0.0), f2 = SymbolSpec::constant(1.0);
        switch (i % 5) {
        case 0: {
            const auto& base = radial_builtins()[static_cast<std::size_t>(uni() * radial_builtins().size()) % radial_builtins().size()];
            f2 = base;
            f1 = base.scaled(uni());
            break;
        }
        case 1: {
            const double a = 0.05 + 3.0 * uni(), b = 0.05 + 3.0 * uni();
            f1 = SymbolSpec::disc(std::min(a, b));
            f2 = SymbolSpec::disc(std::max(a, b));
            break;
        }
        case 2: {
            const int a = 1 + static_cast<int>(uni() * 5) % 5, b = 1 + static_cast<int>(uni() * 5) % 5;
            f1 = SymbolSpec::power_vanish(std::max(a, b));
            f2 = SymbolSpec::power_vanish(std::min(a, b));
            break;
        }
        case 3: {
            std::vector<double> radii{0.0}, lo, hi;
            for (int k = 0; k < 5; ++k) radii.push_back(radii.back() + 0.1 + uni());
            for (std::size_t k = 0; k < radii.size(); ++k) {
                const double x = uni(), y = uni();
                lo.push_back(std::min(x, y));
                hi.push_back(std::max(x, y));
            }
            f1 = SymbolSpec(symbols::RadialTabulated{radii, lo});
            f2 = SymbolSpec(symbols::RadialTabulated{radii, hi});
            break;
        }
        default: {
            const double a = uni();
            const SymbolSpec choices[] = {SymbolSpec::exp_inverse(), SymbolSpec::power_vanish(2), SymbolSpec::disc(1.0)};
            f1 = choices[i % 3].scaled(a);
            f2 = SymbolSpec::constant(a + uni() * (1.0 - a));
            break;
        }
        }
        const auto w = weyl_monotonicity_check(f1, f2, p, 1e-12);
        ++checked;
        if (!w.dominated) ++failed;
        worst = std::max(worst, w.worst_gap);
    }
    r.passed = failed == 0 && checked == 200;
    r.detail = std::to_string(checked) + " ordered pairs, " + std::to_string(failed) +
               " dominance violations, max(lambda_j(f1) - lambda_j(f2)) " + fmt("%.3e", worst) + " (slack 1e-12)";
    return r;
}

CriterionResult c06() {
    CriterionResult r{6, "kernel asymptotics", true, {}, 0.0};
    const auto t0 = Clock::now();
    const int p = 400;
    const auto rep = kernel_gaussian_decay_check(SymbolSpec::constant(1.0), ChartPoint::finite(0.0), {p}, {1.0});
    const auto& near = rep.near.at(0);
    const double exact = -0.5 * p * std::log1p(1.0 / p);
    const double exact_err = std::abs(near.log_n - exact) / std::abs(exact);
    const auto& far = rep.far.at(0);
    const double secs = seconds_since(t0);
    r.passed = exact_err <= 1e-12 && std::abs(near.ratio - 1.0) <= 0.01 && far.holds && far.log_n <= std::log(far.bound) &&
               secs < 1.0;
    r.detail = "log N vs closed form rel " + fmt("%.1e", exact_err) + ", ratio-1 " + fmt("%.3e", near.ratio - 1.0) +
               " (<= 0.01), far field log N " + fmt("%.2f", far.log_n) + " <= log p^-2 " +
               fmt("%.2f", std::log(far.bound)) + ", runtime " + fmt("%.3f", secs) + " s";
    return r;
}

CriterionResult c07(int threads) {
    CriterionResult r{7, "equidistribution of zeros", true, {}, 0.0};
    const auto t0 = Clock::now();
    const auto zs = simulate_zeros(spectrum(50, SymbolSpec::constant(1.0)), 7, 400, threads);
    const double ks = ks_vs_fs(zs);
    const double secs = seconds_since(t0);
    const auto dz = simulate_zeros(spectrum(20, SymbolSpec::disc(1.0)), 7, 1000, threads);
    const double inside = ks_vs_fs_restricted(dz, fs_diameter() / 2.0);
    const double global = ks_vs_fs(dz);
    r.passed = ks <= 0.02 && secs < 60.0 && inside <= 0.03 && global > 0.05;
    r.detail = "const:1 p=50 KS " + fmt("%.4f", ks) + " (<= 0.02) in " + fmt("%.2f", secs) + " s; disc:1 p=20 KS on [0, sqrt(pi)/4] " +
               fmt("%.4f", inside) + " (<= 0.03), global KS " + fmt("%.4f", global) + " (> 0.05)";
    return r;
}

CriterionResult c08(int threads) {
    CriterionResult r{8, "number variance", true, {}, 0.0};
    const auto phi = TestFunction::bump(1.0, 1.0);
    const double lead = variance_leading_term(phi);
    const auto z100 = simulate_linear_statistics(spectrum(100, SymbolSpec::constant(1.0)), phi, 8100, 2000, threads);
    const double pvar = 100.0 * monte_carlo_report(z100).variance;
    const auto sp50 = spectrum(50, SymbolSpec::constant(1.0));
    const double mc50 = monte_carlo_report(simulate_linear_statistics(sp50, phi, 8050, 5000, threads)).variance;
    VarianceOptions opt;
    opt.threads = threads;
    const double bip = variance_bipotential(sp50, phi, opt).value;
    const double dev_lead = std::abs(pvar / lead - 1.0);
    const double dev_bip = std::abs(bip / mc50 - 1.0);
    r.passed = dev_lead <= 0.20 && dev_bip <= 0.10;
    r.detail = "p=100: p Var_MC " + fmt("%.4f", pvar) + " vs leading " + fmt("%.4f", lead) + " (dev " + fmt("%.3f", dev_lead) +
               " <= 0.20); p=50: bipotential " + fmt("%.5f", bip) + " vs Var_MC " + fmt("%.5f", mc50) + " (dev " +
               fmt("%.3f", dev_bip) + " <= 0.10)";
    return r;
}

CriterionResult c09(int threads) {
    CriterionResult r{9, "central limit theorem", true, {}, 0.0};
    const auto t0 = Clock::now();
    const auto rep = clt_report(spectrum(100, SymbolSpec::constant(1.0)), TestFunction::bump(1.0, 1.0), 2000, 9, threads);
    const double secs = seconds_since(t0);
    r.passed = rep.ks_vs_normal <= 0.05 && std::abs(rep.skewness) <= 0.15 && std::abs(rep.excess_kurtosis) <= 0.3 &&
               secs < 300.0;
    r.detail = "KS " + fmt("%.4f", rep.ks_vs_normal) + " (<= 0.05), skew " + fmt("%.4f", rep.skewness) + " (|.| <= 0.15), excess kurtosis " +
               fmt("%.4f", rep.excess_kurtosis) + " (|.| <= 0.3), runtime " + fmt("%.1f", secs) + " s";
    return r;
}

CriterionResult c10(int threads) {
    CriterionResult r{10, "expectation current", true, {}, 0.0};
    const SymbolSpec symbols[] = {SymbolSpec::constant(1.0), SymbolSpec::power_vanish(1), SymbolSpec::disc(1.0)};
    const TestFunction phis[] = {TestFunction::bump(0.5), TestFunction::bump(1.0), TestFunction::bump(2.0)};
    double worst = 0.0;
    std::string where;
    int cells = 0;
    std::uint64_t salt = 0;
    for (const auto& f : symbols)
        for (const auto& phi : phis)
            for (int p : {10, 20, 50}) {
                const auto sp = spectrum(p, f);
                const double exact = expectation_exact(sp, phi).value;
                const auto z = simulate_linear_statistics(sp, phi, derive_seed(10, ++salt), 4000, threads);
                double se = 0.0;
                const double mean = sample_mean_se(z, se);
                const double zscore = std::abs(mean - exact) / se;
                ++cells;
                if (zscore > worst) {
                    worst = zscore;
                    where = f.to_string() + " " + phi.to_string() + " p=" + std::to_string(p);
                }
            }
    r.passed = worst <= 4.0;
    r.detail = std::to_string(cells) + " cells x 4000 trials, max |mean - exact|/SE " + fmt("%.2f", worst) + " (<= 4) at " + where;
    return r;
}

CriterionResult c11(int threads) {
    CriterionResult r{11, "hole probability decay", true, {}, 0.0};
    const auto rep = hole_frequency(SymbolSpec::constant(1.0), FSDisc::chart_disc(0.3), {5, 10, 20, 40}, 5000, 11, threads);
    std::ostringstream os;
    for (const auto& row : rep.rows) os << "p=" << row.p << " " << fmt("%.4f", row.frequency) << " (se " << fmt("%.4f", row.se) << "); ";
    r.passed = rep.strictly_decreasing && rep.within_band;
    os << "strictly decreasing " << (rep.strictly_decreasing ? "yes" : "no") << ", within 2 SE " << (rep.within_band ? "yes" : "no");
    r.detail = os.str();
    return r;
}

CriterionResult c12(int threads) {
    CriterionResult r{12, "mass law of large numbers", true, {}, 0.0};
    const auto one = TestFunction::constant(1.0);
    double worst = 0.0;
    bool decreasing = true;
    double prev = INFINITY;
    for (int p = 1; p <= 200; ++p) {
        const auto mm = mass_moments(spectrum(p, SymbolSpec::constant(1.0)), one);
        worst = std::max(worst, std::abs(mm.mean / ((p + 1.0) / p) - 1.0));
        worst = std::max(worst, std::abs(mm.variance / ((p + 1.0) / (double(p) * p)) - 1.0));
        const double pv = p * mm.variance;
        decreasing = decreasing && pv < prev;
        prev = pv;
    }
    const auto lln = mass_lln_report(SymbolSpec::constant(1.0), one, 200, 12, threads);
    r.passed = worst <= 1e-12 && std::abs(lln.running_average - 1.0) <= 0.05 && decreasing && std::abs(prev - 1.0) <= 0.01;
    r.detail = "exact moments max rel err " + fmt("%.1e", worst) + " (<= 1e-12); running average " + fmt("%.4f", lln.running_average) +
               " (1 +- 0.05); p Var at p=200 " + fmt("%.4f", prev) + " -> 1, decreasing " + (decreasing ? "yes" : "no");
    return r;
}

CriterionResult c13(int threads) {
    CriterionResult r{13, "root-finder integrity", true, {}, 0.0};
    const SymbolSpec symbols[] = {SymbolSpec::constant(1.0), SymbolSpec::power_vanish(2), SymbolSpec::exp_inverse(),
                                  SymbolSpec::disc(1.0), SymbolSpec::disc(0.25)};
    long long samples = 0, bad_count = 0, bad_residual = 0;
    double worst = 0.0;
    std::uint64_t salt = 0;
    for (const auto& f : symbols)
        for (int p : {5, 20, 50, 100, 200}) {
            const auto sp = spectrum(p, f);
            const std::uint64_t seed = derive_seed(13, ++salt);
            std::vector<double> res(400);
            std::vector<int> ok(400);
            parallel_for(400, threads, [&](std::size_t t) {
                const auto s = sample_section(sp, seed, t);
                const auto z = find_roots(s);
                res[t] = residual_check(s, z).residual_max;
                ok[t] = z.total() == p;
            });
            for (int t = 0; t < 400; ++t) {
                ++samples;
                bad_count += ok[t] ? 0 : 1;
                bad_residual += res[t] <= 1e-8 ? 0 : 1;
                worst = std::max(worst, res[t]);
            }
        }
    r.passed = samples == 10000 && bad_count == 0 && bad_residual == 0;
    r.detail = std::to_string(samples) + " samples, count violations " + std::to_string(bad_count) + ", residual > 1e-8: " +
               std::to_string(bad_residual) + ", max residual " + fmt("%.2e", worst);
    return r;
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
    std::map<std::string, std::string> files;
    for (const auto& e : fs::directory_iterator(dir)) {
        std::string text = read_file(e.path());
        if (e.path().filename() == "run.json") {
            auto j = nlohmann::ordered_json::parse(text);
            j.erase("wall_time_s");
            text = j.dump();
        }
        files[e.path().filename().string()] = std::move(text);
    }
    return files;
}

CriterionResult c14() {
    CriterionResult r{14, "determinism", true, {}, 0.0};
    const fs::path dir = fs::temp_directory_path() / ("tzl_determinism_" + std::to_string(::getpid()));
    auto cfg = [&](std::string cmd) {
        RunConfig c;
        c.command = std::move(cmd);
        c.out = dir.string();
        c.threads = 1;
        c.seed = "7";
        return c;
    };
    std::vector<RunConfig> runs;
    {
        auto c = cfg("spectrum");
        c.symbol = "disc:0.1";
        c.p = {1, 20, 200};
        runs.push_back(c);
    }
    {
        auto c = cfg("histogram");
        c.p = {20};
        c.trials = 1000;
        runs.push_back(c);
    }
    {
        auto c = cfg("sample-zeros");
        c.symbol = "expinv";
        c.p = {30};
        c.trials = 50;
        c.samples = true;
        runs.push_back(c);
    }
    {
        auto c = cfg("clt");
        c.p = {30};
        c.trials = 1000;
        runs.push_back(c);
    }
    {
        auto c = cfg("variance");
        c.p = {10, 20};
        c.trials = 200;
        runs.push_back(c);
    }
    {
        auto c = cfg("expectation");
        c.symbol = "disc:1";
        c.phi = "bump:0.8";
        c.p = {10, 20};
        c.trials = 500;
        runs.push_back(c);
    }
    {
        auto c = cfg("hole");
        c.p = {5, 10};
        c.trials = 500;
        runs.push_back(c);
    }
    {
        auto c = cfg("mass");
        c.n_max = 60;
        runs.push_back(c);
    }
    {
        auto c = cfg("kernel-check");
        c.symbol = "power:1";
        c.base = "1";
        c.p = {100, 400};
        runs.push_back(c);
    }
    int identical = 0;
    std::string diff;
    std::ostringstream sink;
    for (const auto& c : runs) {
        std::map<std::string, std::string> first;
        bool same = true;
        for (int rep = 0; rep < 2 && same; ++rep) {
            fs::remove_all(dir);
            if (run(c, sink, sink) != 0) {
                same = false;
                diff += c.command + " failed; ";
                break;
            }
            auto snap = snapshot(dir);
            if (rep == 0) first = std::move(snap);
            else if (snap != first) {
                same = false;
                diff += c.command + " differs; ";
            }
        }
        identical += same ? 1 : 0;
    }
    fs::remove_all(dir);
    r.passed = identical == static_cast<int>(runs.size());
    r.detail = std::to_string(identical) + "/" + std::to_string(runs.size()) +
               " commands byte-identical on rerun (--threads 1; run.json compared without wall_time_s)" +
               (diff.empty() ? "" : ": " + diff);
    return r;
}

} // namespace

CriterionResult check_trace_identity(const SpectrumProvider& provider) {
    CriterionResult r{2, "trace identity", true, {}, 0.0};
    double worst = 0.0;
    std::string where;
    int checked = 0;
    for (const auto& f : radial_builtins()) {
        const double integral = f.integral();
        for (int p = 0; p <= 200; ++p) {
            const auto s = provider(p, f);
            KahanSum tr;
            for (double l : s.lambdas) tr.add(l);
            const double target = (p + 1.0) * integral;
            const double err = std::abs(tr.value() - target) / target;
            ++checked;
            if (err > worst) {
                worst = err;
                where = f.to_string() + " p=" + std::to_string(p);
            }
        }
    }
    r.passed = worst <= 1e-10;
    r.detail = std::to_string(checked) + " spectra, max |sum lambda - (p+1) int f| / target " + fmt("%.2e", worst) +
               " (<= 1e-10) at " + where;
    return r;
}

CriterionResult run_criterion(int id, int threads) {
    require(id >= 1 && id <= 14, "criteria are numbered 1..14");
    const auto t0 = Clock::now();
    CriterionResult r;
    try {
        switch (id) {
        case 1: r = c01(); break;
        case 2: r = check_trace_identity([](int p, const SymbolSpec& f) { return spectrum(p, f); }); break;
        case 3: r = c03(); break;
        case 4: r = c04(); break;
        case 5: r = c05(); break;
        case 6: r = c06(); break;
        case 7: r = c07(threads); break;
        case 8: r = c08(threads); break;
        case 9: r = c09(threads); break;
        case 10: r = c10(threads); break;
        case 11: r = c11(threads); break;
        case 12: r = c12(threads); break;
        case 13: r = c13(threads); break;
        case 14: r = c14(); break;
        }
    } catch (const std::exception& e) {
        r = {id, "criterion", false, std::string("threw: ") + e.what(), 0.0};
    }
    r.seconds = seconds_since(t0);
    return r;
}

std::string format_result(const CriterionResult& r) {
    char head[96];
    std::snprintf(head, sizeof head, "C%02d %s %s (%.2f s): ", r.id, r.passed ? "PASS" : "FAIL", r.name.c_str(), r.seconds);
    return head + r.detail;
}

} // namespace tzl::cli
