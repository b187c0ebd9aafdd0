#include "tzl_cli/commands.hpp"

#include "tzl_cli/acceptance.hpp"
#include "tzl_cli/io.hpp"

#include "tzl/error.hpp"
#include "tzl/gaussian_sampler.hpp"
#include "tzl/numeric.hpp"
#include "tzl/parallel.hpp"
#include "tzl/poly_roots.hpp"
#include "tzl/rng.hpp"
#include "tzl/toeplitz_spectra.hpp"
#include "tzl/variance.hpp"
#include "tzl/zero_statistics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <ostream>

namespace tzl::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct Context {
    RunConfig config;
    std::uint64_t seed = 0;
    int threads = 1;
    fs::path dir;
    std::vector<std::string> artifacts;
    std::ostream& out;

    void table(const Table& t) { artifacts.push_back(write_table(dir, t, config.format)); }
    void json(const std::string& name, const ordered_json& j) { artifacts.push_back(write_json(dir, name, j)); }
};

ordered_json num(double v) { return Cell(v).json(); }
ordered_json num_log(double lv) { return Cell::from_log(lv).json(); }

int single_p(const RunConfig& c) {
    require(c.p.size() == 1, c.command + " needs exactly one --p");
    return c.p.front();
}

std::vector<int> p_list_or(const RunConfig& c, std::vector<int> fallback) {
    return c.p.empty() ? fallback : c.p;
}

ToeplitzSpectrum spectrum_for(const SymbolSpec& f, int p) {
    return f.is_radial() ? spectrum(p, f) : toeplitz_matrix_general(p, f).spectrum;
}

void cmd_spectrum(Context& ctx) {
    const auto& c = ctx.config;
    require(!c.p.empty(), "spectrum needs --p");
    const auto f = SymbolSpec::parse(c.symbol);
    const bool multi = c.p.size() > 1;
    Table t{"spectrum", multi ? std::vector<std::string>{"p", "j", "lambda"} : std::vector<std::string>{"j", "lambda"}, {}};
    ordered_json rows = ordered_json::array();
    for (int p : c.p) {
        const auto s = spectrum_for(f, p);
        for (int j = 0; j <= p; ++j) {
            const Cell v = s.lambdas[j] >= 1e-300 ? Cell(s.lambdas[j]) : Cell::from_log(s.log_lambdas[j]);
            if (multi) t.add({p, j, v});
            else t.add({j, v});
        }
        const auto sum = spectral_summary(s);
        const auto lo = std::min_element(s.log_lambdas.begin(), s.log_lambdas.end());
        const auto hi = std::max_element(s.log_lambdas.begin(), s.log_lambdas.end());
        auto value = [&](std::vector<double>::const_iterator it) {
            const double v = s.lambdas[it - s.log_lambdas.begin()];
            return v >= 1e-300 ? num(v) : num_log(*it);
        };
        rows.push_back({{"p", p},
                        {"method", to_string(s.method)},
                        {"lambda_min", value(lo)},
                        {"lambda_max", value(hi)},
                        {"trace", num(sum.trace)},
                        {"trace_target", num(sum.trace_target)},
                        {"underflow", s.underflow},
                        {"achieved_tol", num(s.achieved_tol)}});
    }
    ctx.table(t);
    ctx.json("summary", {{"symbol", f.to_string()}, {"spectra", rows}});
}

std::vector<ZeroSet> zeros_for(Context& ctx, const ToeplitzSpectrum& sp, std::uint64_t trials) {
    return simulate_zeros(sp, ctx.seed, trials, ctx.threads);
}

void zero_tables(Context& ctx, const ToeplitzSpectrum& sp, const std::vector<ZeroSet>& zs, ordered_json& summary) {
    Table t{"zeros", {"trial", "re", "im", "r_fs"}, {}};
    long long total = 0, at_inf = 0, near_inf = 0, truncated = 0;
    double residual = 0.0;
    int sweeps = 0;
    for (std::size_t i = 0; i < zs.size(); ++i) {
        const auto& z = zs[i];
        for (std::size_t k = 0; k < z.roots.size(); ++k) {
            const complex r = z.roots[k];
            t.add({static_cast<long long>(i), r.real(), r.imag(), fs_norm_of_modulus(std::abs(r))});
            near_inf += z.near_infinity[k] ? 1 : 0;
        }
        for (int k = 0; k < z.mult_infinity; ++k) t.add({static_cast<long long>(i), INFINITY, 0.0, fs_diameter()});
        total += z.total();
        at_inf += z.mult_infinity;
        truncated += z.truncated_tail ? 1 : 0;
        residual = std::max(residual, z.residual_max);
        sweeps = std::max(sweeps, z.sweeps);
    }
    ctx.table(t);
    if (ctx.config.samples) {
        Table s{"samples", {"trial", "j", "re", "im", "scale_exponent"}, {}};
        for (std::size_t i = 0; i < zs.size(); ++i) {
            const auto smp = sample_section(sp, ctx.seed, i);
            for (std::size_t j = 0; j < smp.coeffs.size(); ++j)
                s.add({static_cast<long long>(i), static_cast<long long>(j), smp.coeffs[j].real(), smp.coeffs[j].imag(),
                       smp.scale_exponent});
        }
        ctx.table(s);
    }
    summary["p"] = sp.p;
    summary["symbol"] = sp.symbol.to_string();
    summary["trials"] = zs.size();
    summary["total_zeros"] = total;
    summary["at_infinity"] = at_inf;
    summary["near_infinity"] = near_inf;
    summary["truncated_trials"] = truncated;
    summary["residual_max"] = num(residual);
    summary["max_sweeps"] = sweeps;
}

void cmd_sample_zeros(Context& ctx, bool histogram) {
    const auto& c = ctx.config;
    const int p = single_p(c);
    require(p >= 1, c.command + " needs p >= 1");
    const auto sp = spectrum_for(SymbolSpec::parse(c.symbol), p);
    const auto trials = trials_for(c, p, 0, 20000);
    const auto zs = zeros_for(ctx, sp, trials);
    ordered_json summary;
    zero_tables(ctx, sp, zs, summary);
    if (histogram) {
        const auto h = fs_histogram(zs, c.bins);
        Table t{"hist", {"bin_lo", "bin_hi", "count", "density", "psi_mid"}, {}};
        for (std::size_t b = 0; b < h.counts.size(); ++b)
            t.add({h.bin_edges[b], h.bin_edges[b + 1], h.counts[b], h.density[b], h.psi_mid[b]});
        ctx.table(t);
        summary["bins"] = c.bins;
        summary["ks_vs_fs"] = num(ks_vs_fs(zs));
        summary["ks_vs_fs_inside"] = num(ks_vs_fs_restricted(zs, fs_diameter() / 2.0));
    }
    ctx.json("summary", summary);
}

ordered_json report_json(const MonteCarloReport& r) {
    return {{"trials", r.trials},
            {"mean", num(r.mean)},
            {"variance", num(r.variance)},
            {"skewness", num(r.skewness)},
            {"excess_kurtosis", num(r.excess_kurtosis)},
            {"ks_vs_normal", num(r.ks_vs_normal)}};
}

void cmd_clt(Context& ctx) {
    const auto& c = ctx.config;
    const int p = single_p(c);
    const auto sp = spectrum_for(SymbolSpec::parse(c.symbol), p);
    const auto phi = TestFunction::parse(c.phi);
    const auto r = clt_report(sp, phi, trials_for(c, p, 2000), ctx.seed, ctx.threads, true);
    Table t{"clt", {"trial", "Z", "Z_standardized"}, {}};
    for (std::size_t i = 0; i < r.per_trial->size(); ++i)
        t.add({static_cast<long long>(i), (*r.per_trial)[i], (*r.standardized)[i]});
    ctx.table(t);
    auto j = report_json(r);
    j["p"] = p;
    j["symbol"] = sp.symbol.to_string();
    j["phi"] = phi.to_string();
    j["expectation_exact"] = num(expectation_exact(sp, phi).value);
    ctx.json("summary", j);
}

void cmd_variance(Context& ctx) {
    const auto& c = ctx.config;
    require(!c.p.empty(), "variance needs --p");
    const auto f = SymbolSpec::parse(c.symbol);
    const auto phi = TestFunction::parse(c.phi);
    const double lead = variance_leading_term(phi);
    Table t{"variance", {"p", "variance", "achieved_tol", "leading_term", "p_variance"}, {}};
    Table mc{"variance_mc", {"p", "trials", "mc_mean", "mc_variance"}, {}};
    for (int p : c.p) {
        const auto sp = spectrum_for(f, p);
        VarianceOptions opt;
        opt.threads = ctx.threads;
        const auto v = variance_bipotential(sp, phi, opt);
        t.add({p, v.value, v.achieved_tol, lead, p * v.value});
        if (c.trials) {
            const auto z = simulate_linear_statistics(sp, phi, derive_seed(ctx.seed, p), *c.trials, ctx.threads);
            const auto r = monte_carlo_report(z);
            mc.add({p, static_cast<long long>(*c.trials), r.mean, r.variance});
        }
    }
    ctx.table(t);
    if (c.trials) ctx.table(mc);
}

void cmd_expectation(Context& ctx) {
    const auto& c = ctx.config;
    require(!c.p.empty(), "expectation needs --p");
    const auto f = SymbolSpec::parse(c.symbol);
    const auto phi = TestFunction::parse(c.phi);
    Table t{"expectation", {"p", "exact", "smooth_term", "correction_term"}, {}};
    Table mc{"expectation_mc", {"p", "trials", "mc_mean", "mc_se", "z_score"}, {}};
    for (int p : c.p) {
        const auto sp = spectrum_for(f, p);
        const auto e = expectation_exact(sp, phi);
        t.add({p, e.value, e.smooth_term, e.correction_term});
        if (c.trials) {
            const auto z = simulate_linear_statistics(sp, phi, derive_seed(ctx.seed, p), *c.trials, ctx.threads);
            const auto r = monte_carlo_report(z);
            const double se = std::sqrt(r.variance / static_cast<double>(*c.trials));
            mc.add({p, static_cast<long long>(*c.trials), r.mean, se, (r.mean - e.value) / se});
        }
    }
    ctx.table(t);
    if (c.trials) ctx.table(mc);
}

void cmd_hole(Context& ctx) {
    const auto& c = ctx.config;
    const auto f = SymbolSpec::parse(c.symbol);
    const auto ps = p_list_or(c, {5, 10, 20, 40});
    const auto rep = hole_frequency(f, FSDisc::chart_disc(c.radius), ps, trials_for(c, 1, 5000), ctx.seed, ctx.threads);
    Table t{"hole", {"p", "trials", "holes", "frequency"}, {}};
    ordered_json se = ordered_json::array();
    for (const auto& r : rep.rows) {
        t.add({r.p, static_cast<long long>(r.trials), static_cast<long long>(r.holes), r.frequency});
        se.push_back(num(r.se));
    }
    ctx.table(t);
    ctx.json("summary", {{"symbol", f.to_string()},
                         {"chart_radius", num(c.radius)},
                         {"fs_radius", num(fs_norm_of_modulus(c.radius))},
                         {"standard_errors", se},
                         {"strictly_decreasing", rep.strictly_decreasing},
                         {"within_band", rep.within_band}});
}

void cmd_mass(Context& ctx) {
    const auto& c = ctx.config;
    const auto f = SymbolSpec::parse(c.symbol);
    const auto g = TestFunction::parse(c.g);
    const auto rep = mass_lln_report(f, g, c.n_max, ctx.seed, ctx.threads);
    Table t{"mass", {"p", "Y"}, {}};
    for (const auto& r : rep.rows) t.add({r.p, r.y});
    ctx.table(t);
    const auto mm = mass_moments(spectrum_for(f, c.n_max), g);
    ctx.json("summary", {{"symbol", f.to_string()},
                         {"g", g.to_string()},
                         {"n_max", c.n_max},
                         {"running_average", num(rep.running_average)},
                         {"limit", num(rep.limit)},
                         {"exact_mean_at_n_max", num(mm.mean)},
                         {"exact_variance_at_n_max", num(mm.variance)},
                         {"p_times_variance_at_n_max", num(c.n_max * mm.variance)}});
}

ChartPoint parse_base(const std::string& s) {
    if (s == "inf") return ChartPoint::infinity();
    const auto comma = s.find(',');
    try {
        std::size_t used = 0;
        const double re = std::stod(s.substr(0, comma), &used);
        require(used == (comma == std::string::npos ? s.size() : comma), "");
        double im = 0.0;
        if (comma != std::string::npos) {
            const std::string rest = s.substr(comma + 1);
            im = std::stod(rest, &used);
            require(used == rest.size(), "");
        }
        return ChartPoint::finite(complex(re, im));
    } catch (const std::exception&) {
        throw PreconditionError("base point must be 're[,im]' or 'inf', got '" + s + "'");
    }
}

void cmd_kernel_check(Context& ctx) {
    const auto& c = ctx.config;
    const auto f = SymbolSpec::parse(c.symbol);
    const auto rep = kernel_gaussian_decay_check(f, parse_base(c.base), p_list_or(c, {400}), c.offsets, c.directions);
    Table near{"kernel", {"p", "offset", "direction", "log_n", "model", "ratio"}, {}};
    for (const auto& r : rep.near) near.add({r.p, r.offset, r.direction, r.log_n, r.model, r.ratio});
    Table far{"kernel_far", {"p", "distance", "log_n", "bound", "holds"}, {}};
    for (const auto& r : rep.far) far.add({r.p, r.distance, r.log_n, r.bound, r.holds});
    ctx.table(near);
    ctx.table(far);
    ctx.json("summary", {{"symbol", f.to_string()},
                         {"base", c.base},
                         {"worst_near_deviation", num(rep.worst_near_deviation)},
                         {"remainder_exponent", rep.remainder_exponent ? num(*rep.remainder_exponent) : ordered_json()}});
}

int cmd_selftest(Context& ctx) {
    const auto& c = ctx.config;
    std::vector<int> ids = c.criteria;
    if (ids.empty())
        for (int i = 1; i <= 14; ++i) ids.push_back(i);
    Table t{"selftest", {"criterion", "name", "passed", "seconds", "detail"}, {}};
    bool all = true;
    for (int id : ids) {
        const auto r = run_criterion(id, ctx.threads);
        ctx.out << format_result(r) << '\n';
        ctx.out.flush();
        std::string detail = r.detail;
        std::replace(detail.begin(), detail.end(), ',', ';');
        t.add({r.id, r.name, r.passed, r.seconds, detail});
        all = all && r.passed;
    }
    ctx.table(t);
    return all ? 0 : 1;
}

} // namespace

int run(const RunConfig& input, std::ostream& out, std::ostream& err) {
    const auto start = std::chrono::steady_clock::now();
    try {
        validate(input);
        RunConfig cfg = input;
        const std::uint64_t seed = resolve_seed(cfg.seed);
        cfg.seed = std::to_string(seed);
        Context ctx{cfg, seed, resolve_threads(cfg.threads), fs::path(cfg.out), {}, out};
        std::error_code ec;
        fs::create_directories(ctx.dir, ec);
        require(fs::is_directory(ctx.dir), "cannot create output directory '" + cfg.out + "'");

        int code = 0;
        const std::string& cmd = cfg.command;
        if (cmd == "spectrum") cmd_spectrum(ctx);
        else if (cmd == "sample-zeros") cmd_sample_zeros(ctx, false);
        else if (cmd == "histogram") cmd_sample_zeros(ctx, true);
        else if (cmd == "clt") cmd_clt(ctx);
        else if (cmd == "variance") cmd_variance(ctx);
        else if (cmd == "expectation") cmd_expectation(ctx);
        else if (cmd == "hole") cmd_hole(ctx);
        else if (cmd == "mass") cmd_mass(ctx);
        else if (cmd == "kernel-check") cmd_kernel_check(ctx);
        else if (cmd == "selftest") code = cmd_selftest(ctx);

        ordered_json manifest;
        manifest["tool"] = "tzl";
        manifest["version"] = TZL_VERSION;
        manifest["command"] = cmd;
        manifest["config"] = to_json(cfg);
        manifest["seed"] = seed;
        manifest["threads"] = ctx.threads;
        manifest["artifacts"] = ctx.artifacts;
        manifest["exit_code"] = code;
        manifest["wall_time_s"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        require(config_from_json(nlohmann::json::parse(manifest["config"].dump())) == cfg,
                "manifest does not round-trip the configuration");
        write_json(ctx.dir, "run", manifest);
        for (const auto& a : ctx.artifacts) out << "wrote " << (ctx.dir / a).string() << '\n';
        return code;
    } catch (const ConvergenceError& e) {
        err << "tzl: convergence failure: " << e.what() << " (achieved " << e.achieved() << ")\n";
        return 2;
    } catch (const std::exception& e) {
        err << "tzl: error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace tzl::cli
