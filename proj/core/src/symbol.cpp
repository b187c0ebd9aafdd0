#include "tzl/symbol.hpp"

#include "tzl/error.hpp"
#include "tzl/numeric.hpp"
#include "tzl/quadrature.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace tzl {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double rho_from_volume(double u) {
    if (u >= 1.0) return std::numeric_limits<double>::infinity();
    return std::sqrt(u / (1.0 - u));
}

double volume_from_rho(double rho) { return disc_volume(rho); }

double interp_radial(const std::vector<double>& radii, const std::vector<double>& values,
                     double rho) {
    if (rho <= radii.front()) return values.front();
    if (rho >= radii.back()) return values.back();
    const auto it = std::upper_bound(radii.begin(), radii.end(), rho);
    const std::size_t hi = static_cast<std::size_t>(it - radii.begin());
    const std::size_t lo = hi - 1;
    const double w = (rho - radii[lo]) / (radii[hi] - radii[lo]);
    return values[lo] + w * (values[hi] - values[lo]);
}

double grid_value(const symbols::GeneralGrid& g, double rho, double theta) {
    const int na = g.n_angles;
    const double step = 2.0 * kPi / na;
    double t = std::fmod(theta, 2.0 * kPi);
    if (t < 0.0) t += 2.0 * kPi;
    const double pos = t / step;
    int m0 = static_cast<int>(std::floor(pos));
    const double wa = pos - m0;
    m0 %= na;
    const int m1 = (m0 + 1) % na;

    const auto& radii = g.radii;
    std::size_t r0 = 0;
    std::size_t r1 = 0;
    double wr = 0.0;
    if (rho <= radii.front()) {
        r0 = r1 = 0;
    } else if (rho >= radii.back()) {
        r0 = r1 = radii.size() - 1;
    } else {
        const auto it = std::upper_bound(radii.begin(), radii.end(), rho);
        r1 = static_cast<std::size_t>(it - radii.begin());
        r0 = r1 - 1;
        wr = (rho - radii[r0]) / (radii[r1] - radii[r0]);
    }
    auto at = [&](std::size_t r, int m) { return g.values[r * static_cast<std::size_t>(na) + m]; };
    const double v0 = (1.0 - wa) * at(r0, m0) + wa * at(r0, m1);
    const double v1 = (1.0 - wa) * at(r1, m0) + wa * at(r1, m1);
    return (1.0 - wr) * v0 + wr * v1;
}

void validate(const SymbolSpec::Variant& v) {
    std::visit(overloaded{
                   [](const symbols::Constant& s) {
                       require(std::isfinite(s.c) && s.c >= 0.0, "Constant symbol must be >= 0");
                   },
                   [](const symbols::PowerVanish& s) {
                       require(s.k >= 1, "PowerVanish symbol needs k >= 1");
                   },
                   [](const symbols::ExpInverse&) {},
                   [](const symbols::DiscIndicator& s) {
                       require(std::isfinite(s.r) && s.r > 0.0,
                               "DiscIndicator radius must be finite and positive");
                   },
                   [](const symbols::RadialTabulated& s) {
                       require(s.radii.size() >= 2 && s.radii.size() == s.values.size(),
                               "RadialTabulated needs matching radii/values with >= 2 samples");
                       require(s.radii.front() >= 0.0, "RadialTabulated radii must be >= 0");
                       for (std::size_t i = 1; i < s.radii.size(); ++i)
                           require(s.radii[i] > s.radii[i - 1],
                                   "RadialTabulated radii must be strictly increasing");
                       for (double x : s.values)
                           require(std::isfinite(x) && x >= 0.0,
                                   "RadialTabulated values must be finite and >= 0");
                   },
                   [](const symbols::GeneralGrid& s) {
                       require(s.n_angles >= 1 && !s.radii.empty() &&
                                   s.values.size() == s.radii.size() * static_cast<std::size_t>(s.n_angles),
                               "GeneralGrid: values must be radii.size() x n_angles");
                       for (std::size_t i = 1; i < s.radii.size(); ++i)
                           require(s.radii[i] > s.radii[i - 1],
                                   "GeneralGrid radii must be strictly increasing");
                       for (double x : s.values)
                           require(std::isfinite(x) && x >= 0.0, "GeneralGrid values must be >= 0");
                   },
               },
               v);
}

std::string format_number(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

double parse_number(const std::string& s, const std::string& context) {
    double value = 0.0;
    const auto* first = s.data();
    const auto* last = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    require(ec == std::errc() && ptr == last && !s.empty(),
            "unknown symbol string '" + context + "': bad number '" + s + "'");
    return value;
}

} // namespace

SymbolSpec::SymbolSpec(Variant v, double scale) : v_(std::move(v)), scale_(scale) {
    require(std::isfinite(scale) && scale >= 0.0, "symbol scale factor must be >= 0");
    validate(v_);
}

SymbolSpec SymbolSpec::scaled(double factor) const {
    require(std::isfinite(factor) && factor >= 0.0, "symbol scale factor must be >= 0");
    return SymbolSpec(v_, scale_ * factor);
}

bool SymbolSpec::is_radial() const noexcept {
    return !std::holds_alternative<symbols::GeneralGrid>(v_);
}

double SymbolSpec::value_at_volume(double u) const {
    require(u >= 0.0 && u <= 1.0, "value_at_volume: u must lie in [0, 1]");
    require(is_radial(), "value_at_volume: symbol is not radial");
    const double base = std::visit(
        overloaded{
            [](const symbols::Constant& s) { return s.c; },
            [u](const symbols::PowerVanish& s) { return std::pow(u, s.k); },
            [u](const symbols::ExpInverse&) {
                if (u <= 0.0) return 0.0;
                return std::exp(-(1.0 - u) / u);
            },
            [u](const symbols::DiscIndicator& s) {
                return u < volume_from_rho(s.r) ? 1.0 : 0.0;
            },
            [u](const symbols::RadialTabulated& s) {
                return interp_radial(s.radii, s.values, rho_from_volume(u));
            },
            [](const symbols::GeneralGrid&) { return 0.0; },
        },
        v_);
    return scale_ * base;
}

double SymbolSpec::radial_value(double rho) const {
    require(rho >= 0.0, "radial_value: rho must be nonnegative");
    require(is_radial(), "radial_value: symbol is not radial");
    const double base = std::visit(
        overloaded{
            [](const symbols::Constant& s) { return s.c; },
            [rho](const symbols::PowerVanish& s) {
                if (std::isinf(rho)) return 1.0;
                const double r2 = rho * rho;
                return std::pow(r2 / (1.0 + r2), s.k);
            },
            [rho](const symbols::ExpInverse&) {
                if (rho == 0.0) return 0.0;
                return std::exp(-1.0 / (rho * rho));
            },
            [rho](const symbols::DiscIndicator& s) { return rho < s.r ? 1.0 : 0.0; },
            [rho](const symbols::RadialTabulated& s) { return interp_radial(s.radii, s.values, rho); },
            [](const symbols::GeneralGrid&) { return 0.0; },
        },
        v_);
    return scale_ * base;
}

double SymbolSpec::value(const ChartPoint& z) const {
    if (const auto* g = std::get_if<symbols::GeneralGrid>(&v_)) {
        if (z.is_infinity()) return scale_ * grid_value(*g, g->radii.back(), 0.0);
        const complex w = z.coord();
        return scale_ * grid_value(*g, std::abs(w), std::arg(w));
    }
    return radial_value(z.modulus());
}

double SymbolSpec::sup_norm() const {
    const double base = std::visit(
        overloaded{
            [](const symbols::Constant& s) { return s.c; },
            [](const symbols::PowerVanish&) { return 1.0; },
            [](const symbols::ExpInverse&) { return 1.0; },
            [](const symbols::DiscIndicator&) { return 1.0; },
            [](const symbols::RadialTabulated& s) {
                return *std::max_element(s.values.begin(), s.values.end());
            },
            [](const symbols::GeneralGrid& s) {
                return *std::max_element(s.values.begin(), s.values.end());
            },
        },
        v_);
    return scale_ * base;
}

std::vector<double> SymbolSpec::volume_breakpoints() const {
    std::vector<double> out;
    std::visit(overloaded{
                   [&](const symbols::DiscIndicator& s) { out.push_back(volume_from_rho(s.r)); },
                   [&](const symbols::RadialTabulated& s) {
                       for (double r : s.radii)
                           if (r > 0.0) out.push_back(volume_from_rho(r));
                   },
                   [&](const symbols::GeneralGrid& s) {
                       for (double r : s.radii)
                           if (r > 0.0) out.push_back(volume_from_rho(r));
                   },
                   [](const auto&) {},
               },
               v_);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

double SymbolSpec::integral() const {
    if (scale_ == 0.0) return 0.0;
    if (const auto* g = std::get_if<symbols::GeneralGrid>(&v_)) {
        // Bilinear in theta: the angular mean on each ring is the node mean.
        const auto& gg = *g;
        const auto bps = volume_breakpoints();
        const auto res = integrate_interval(
            [&](double u) {
                const double rho = rho_from_volume(u);
                KahanSum acc;
                for (int m = 0; m < gg.n_angles; ++m)
                    acc.add(grid_value(gg, rho, 2.0 * kPi * m / gg.n_angles));
                return acc.value() / gg.n_angles;
            },
            0.0, 1.0, 1e-13, 1e-15, bps);
        return scale_ * res.value;
    }
    const double base = std::visit(
        overloaded{
            [](const symbols::Constant& s) { return s.c; },
            [](const symbols::PowerVanish& s) { return 1.0 / (s.k + 1.0); },
            [](const symbols::DiscIndicator& s) { return volume_from_rho(s.r); },
            [this](const auto&) {
                const auto bps = volume_breakpoints();
                const double sc = scale_;
                const auto res = integrate_interval(
                    [this, sc](double u) { return value_at_volume(u) / sc; }, 0.0, 1.0, 1e-14,
                    1e-16, bps);
                return res.value;
            },
        },
        v_);
    return scale_ * base;
}

double SymbolSpec::superlevel_volume(double a) const {
    require(is_radial(), "superlevel_volume: symbol is not radial");
    if (scale_ == 0.0) return 0.0;
    const double t = a / scale_;
    return std::visit(
        overloaded{
            [t](const symbols::Constant& s) { return s.c > t ? 1.0 : 0.0; },
            [t](const symbols::PowerVanish& s) {
                if (t < 0.0) return 1.0;
                if (t >= 1.0) return 0.0;
                return 1.0 - std::pow(t, 1.0 / s.k);
            },
            [t](const symbols::ExpInverse&) {
                if (t < 0.0) return 1.0;
                if (t <= 0.0) return 1.0;  // f > 0 except at the origin
                if (t >= 1.0) return 0.0;
                const double L = -std::log(t);
                return L / (1.0 + L);
            },
            [t](const symbols::DiscIndicator& s) { return t < 1.0 ? volume_from_rho(s.r) : 0.0; },
            [t](const symbols::RadialTabulated& s) {
                // Linear pieces in rho: collect the rho-intervals where f > t.
                double vol = 0.0;
                const auto& r = s.radii;
                const auto& v = s.values;
                if (v.front() > t) vol += volume_from_rho(r.front());
                for (std::size_t i = 0; i + 1 < r.size(); ++i) {
                    const double a0 = v[i] - t;
                    const double a1 = v[i + 1] - t;
                    if (a0 > 0.0 && a1 > 0.0) {
                        vol += volume_from_rho(r[i + 1]) - volume_from_rho(r[i]);
                    } else if (a0 > 0.0 || a1 > 0.0) {
                        const double cross = r[i] + (r[i + 1] - r[i]) * a0 / (a0 - a1);
                        if (a0 > 0.0)
                            vol += volume_from_rho(cross) - volume_from_rho(r[i]);
                        else
                            vol += volume_from_rho(r[i + 1]) - volume_from_rho(cross);
                    }
                }
                if (v.back() > t) vol += 1.0 - volume_from_rho(r.back());
                return vol;
            },
            [](const symbols::GeneralGrid&) { return 0.0; },
        },
        v_);
}

bool SymbolSpec::is_trivial() const { return scale_ == 0.0 || sup_norm() == 0.0; }

std::string SymbolSpec::to_string() const {
    const std::string body = std::visit(
        overloaded{
            [](const symbols::Constant& s) { return "const:" + format_number(s.c); },
            [](const symbols::PowerVanish& s) { return "power:" + std::to_string(s.k); },
            [](const symbols::ExpInverse&) { return std::string("expinv"); },
            [](const symbols::DiscIndicator& s) { return "disc:" + format_number(s.r); },
            [](const symbols::RadialTabulated& s) {
                return "tabulated:" + std::to_string(s.radii.size());
            },
            [](const symbols::GeneralGrid& s) {
                return "grid:" + std::to_string(s.radii.size()) + "x" + std::to_string(s.n_angles);
            },
        },
        v_);
    if (scale_ == 1.0) return body;
    return format_number(scale_) + "*" + body;
}

SymbolSpec SymbolSpec::parse(const std::string& text) {
    std::string body = text;
    double factor = 1.0;
    if (const auto star = body.find('*'); star != std::string::npos) {
        factor = parse_number(body.substr(0, star), text);
        body = body.substr(star + 1);
    }
    const auto colon = body.find(':');
    const std::string head = body.substr(0, colon);
    const std::string arg = colon == std::string::npos ? std::string() : body.substr(colon + 1);
    auto need_arg = [&] {
        require(!arg.empty(), "unknown symbol string '" + text + "': missing parameter");
    };
    SymbolSpec out = [&]() -> SymbolSpec {
        if (head == "const") {
            need_arg();
            return constant(parse_number(arg, text));
        }
        if (head == "power") {
            need_arg();
            const double k = parse_number(arg, text);
            require(k == std::floor(k) && k >= 1 && k <= 1000,
                    "unknown symbol string '" + text + "': power needs an integer k >= 1");
            return power_vanish(static_cast<int>(k));
        }
        if (head == "expinv") {
            require(arg.empty(), "unknown symbol string '" + text + "': expinv takes no parameter");
            return exp_inverse();
        }
        if (head == "disc") {
            need_arg();
            return disc(parse_number(arg, text));
        }
        throw PreconditionError("unknown symbol string '" + text + "'");
    }();
    return factor == 1.0 ? out : out.scaled(factor);
}

} // namespace tzl
