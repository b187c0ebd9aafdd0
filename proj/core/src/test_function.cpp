#include "tzl/test_function.hpp"

#include "tzl/error.hpp"
#include "tzl/numeric.hpp"
#include "tzl/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace tzl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double volume_of_radius(double rho) { return rho * rho / (1.0 + rho * rho); }
double radius_of_volume(double u) { return std::sqrt(u / (1.0 - u)); }

// Natural cubic spline: second derivatives at the knots.
std::vector<double> spline_moments(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    std::vector<double> m(n, 0.0);
    if (n < 3) return m;
    std::vector<double> a(n, 0.0), b(n, 0.0), c(n, 0.0), d(n, 0.0);
    b[0] = b[n - 1] = 1.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double h0 = x[i] - x[i - 1], h1 = x[i + 1] - x[i];
        a[i] = h0 / 6.0;
        b[i] = (h0 + h1) / 3.0;
        c[i] = h1 / 6.0;
        d[i] = (y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0;
    }
    for (std::size_t i = 1; i < n; ++i) {
        const double w = a[i] / b[i - 1];
        b[i] -= w * c[i - 1];
        d[i] -= w * d[i - 1];
    }
    m[n - 1] = d[n - 1] / b[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) m[i] = (d[i] - c[i] * m[i + 1]) / b[i];
    return m;
}

struct SplineEval {
    double v, d1, d2;
};

SplineEval spline_eval(const phi::Tabulated& t, const std::vector<double>& m, double rho) {
    const auto& x = t.radii;
    const auto& y = t.values;
    if (rho >= x.back()) return {y.back(), 0.0, 0.0};
    const std::size_t k =
        std::min<std::size_t>(std::upper_bound(x.begin(), x.end(), rho) - x.begin() - 1, x.size() - 2);
    const double h = x[k + 1] - x[k];
    const double A = (x[k + 1] - rho) / h, B = (rho - x[k]) / h;
    const double v = A * y[k] + B * y[k + 1] + ((A * A * A - A) * m[k] + (B * B * B - B) * m[k + 1]) * h * h / 6.0;
    const double d1 = (y[k + 1] - y[k]) / h - (3 * A * A - 1) / 6.0 * h * m[k] + (3 * B * B - 1) / 6.0 * h * m[k + 1];
    const double d2 = A * m[k] + B * m[k + 1];
    return {v, d1, d2};
}

} // namespace

TestFunction::TestFunction(Variant v) : v_(std::move(v)) {
    std::visit(
        [&](const auto& f) {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, phi::RadialBump>) {
                require(f.rho0 > 0.0 && std::isfinite(f.rho0), "RadialBump: rho0 must be positive");
                require(std::isfinite(f.amplitude), "RadialBump: amplitude must be finite");
            } else if constexpr (std::is_same_v<T, phi::Tabulated>) {
                require(f.radii.size() >= 2 && f.radii.size() == f.values.size(),
                        "Tabulated: need >= 2 matching samples");
                require(f.radii.front() == 0.0, "Tabulated: first radius must be 0");
                for (std::size_t i = 1; i < f.radii.size(); ++i)
                    require(f.radii[i] > f.radii[i - 1], "Tabulated: radii must increase strictly");
                m_ = spline_moments(f.radii, f.values);
            } else if constexpr (std::is_same_v<T, phi::Constant>) {
                require(std::isfinite(f.c), "Constant: value must be finite");
            }
        },
        v_);
}

TestFunction TestFunction::tabulated(std::vector<double> radii, std::vector<double> values) {
    return TestFunction(phi::Tabulated{std::move(radii), std::move(values)});
}

double TestFunction::value(double rho) const {
    require(rho >= 0.0, "test function: rho must be >= 0");
    return std::visit(
        [&](const auto& f) -> double {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, phi::RadialBump>) {
                if (rho >= f.rho0) return 0.0;
                const double s = 1.0 - (rho / f.rho0) * (rho / f.rho0);
                return f.amplitude * s * s * s * s;
            } else if constexpr (std::is_same_v<T, phi::LogProfile>) {
                return std::log1p(rho * rho);
            } else if constexpr (std::is_same_v<T, phi::Tabulated>) {
                return spline_eval(f, m_, rho).v;
            } else {
                return f.c;
            }
        },
        v_);
}

double TestFunction::value(const ChartPoint& z) const {
    if (!z.is_infinity()) return value(z.modulus());
    return std::visit(
        [&](const auto& f) -> double {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, phi::RadialBump>) {
                return 0.0;
            } else if constexpr (std::is_same_v<T, phi::LogProfile>) {
                return kInf;
            } else if constexpr (std::is_same_v<T, phi::Tabulated>) {
                return f.values.back();
            } else {
                return f.c;
            }
        },
        v_);
}

double TestFunction::d1(double rho) const {
    require(rho >= 0.0, "test function: rho must be >= 0");
    return std::visit(
        [&](const auto& f) -> double {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, phi::RadialBump>) {
                if (rho >= f.rho0) return 0.0;
                const double s = 1.0 - (rho / f.rho0) * (rho / f.rho0);
                return -8.0 * f.amplitude * rho * s * s * s / (f.rho0 * f.rho0);
            } else if constexpr (std::is_same_v<T, phi::LogProfile>) {
                return 2.0 * rho / (1.0 + rho * rho);
            } else if constexpr (std::is_same_v<T, phi::Tabulated>) {
                return spline_eval(f, m_, rho).d1;
            } else {
                return 0.0;
            }
        },
        v_);
}

double TestFunction::d2(double rho) const {
    require(rho >= 0.0, "test function: rho must be >= 0");
    return std::visit(
        [&](const auto& f) -> double {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, phi::RadialBump>) {
                if (rho >= f.rho0) return 0.0;
                const double r2 = f.rho0 * f.rho0;
                const double t = rho * rho / r2;
                const double s = 1.0 - t;
                return f.amplitude * (-8.0 * s * s * s + 48.0 * t * s * s) / r2;
            } else if constexpr (std::is_same_v<T, phi::LogProfile>) {
                const double q = 1.0 + rho * rho;
                return 2.0 * (1.0 - rho * rho) / (q * q);
            } else if constexpr (std::is_same_v<T, phi::Tabulated>) {
                return spline_eval(f, m_, rho).d2;
            } else {
                return 0.0;
            }
        },
        v_);
}

double TestFunction::radial_laplacian(double rho) const {
    require(rho >= 0.0, "test function: rho must be >= 0");
    if (const auto* b = std::get_if<phi::RadialBump>(&v_)) {
        if (rho >= b->rho0) return 0.0;
        const double r2 = b->rho0 * b->rho0;
        const double t = rho * rho / r2;
        const double s = 1.0 - t;
        return b->amplitude * (-16.0 * s * s * s + 48.0 * t * s * s) / r2;
    }
    if (std::holds_alternative<phi::LogProfile>(v_)) {
        const double q = 1.0 + rho * rho;
        return 4.0 / (q * q);
    }
    if (rho == 0.0) return 2.0 * d2(0.0);
    return d2(rho) + d1(rho) / rho;
}

double TestFunction::support_radius() const {
    return std::visit(
        [](const auto& f) -> double {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, phi::RadialBump>) {
                return f.rho0;
            } else if constexpr (std::is_same_v<T, phi::LogProfile>) {
                return kInf;
            } else if constexpr (std::is_same_v<T, phi::Tabulated>) {
                return f.radii.back();
            } else {
                return 0.0;
            }
        },
        v_);
}

std::vector<double> TestFunction::volume_breakpoints() const {
    std::vector<double> out;
    if (const auto* b = std::get_if<phi::RadialBump>(&v_)) out.push_back(volume_of_radius(b->rho0));
    if (const auto* t = std::get_if<phi::Tabulated>(&v_))
        for (std::size_t i = 1; i < t->radii.size(); ++i) out.push_back(volume_of_radius(t->radii[i]));
    return out;
}

bool TestFunction::is_constant() const {
    if (std::holds_alternative<phi::Constant>(v_)) return true;
    if (const auto* b = std::get_if<phi::RadialBump>(&v_)) return b->amplitude == 0.0;
    if (const auto* t = std::get_if<phi::Tabulated>(&v_))
        return std::all_of(t->values.begin(), t->values.end(), [&](double v) { return v == t->values[0]; });
    return false;
}

std::string TestFunction::to_string() const {
    std::ostringstream os;
    os.precision(17);
    std::visit(
        [&](const auto& f) {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, phi::RadialBump>) {
                os << "bump:" << f.rho0 << ',' << f.amplitude;
            } else if constexpr (std::is_same_v<T, phi::LogProfile>) {
                os << "log";
            } else if constexpr (std::is_same_v<T, phi::Tabulated>) {
                os << "tabulated:" << f.radii.size();
            } else {
                os << "const:" << f.c;
            }
        },
        v_);
    return os.str();
}

TestFunction TestFunction::parse(const std::string& text) {
    auto number = [&](const std::string& s) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        require(used == s.size() && !s.empty(), "test function: bad number in '" + text + "'");
        return v;
    };
    if (text == "log") return log_profile();
    if (text.rfind("const:", 0) == 0) return constant(number(text.substr(6)));
    if (text.rfind("bump:", 0) == 0) {
        const std::string rest = text.substr(5);
        const auto comma = rest.find(',');
        if (comma == std::string::npos) return bump(number(rest));
        return bump(number(rest.substr(0, comma)), number(rest.substr(comma + 1)));
    }
    throw PreconditionError("test function: unknown form '" + text + "' (bump:r[,A] | log | const:c)");
}

double l_of_phi(const TestFunction& f, double rho) {
    require(rho >= 0.0, "l_of_phi: rho must be >= 0");
    if (std::holds_alternative<phi::Tabulated>(f.variant())) return l_of_phi_fd(f, rho);
    const double q = 1.0 + rho * rho;
    return 0.5 * kPi * q * q * f.radial_laplacian(rho);
}

double l_of_phi_fd(const TestFunction& f, double rho, double h) {
    require(rho >= 0.0, "l_of_phi: rho must be >= 0");
    // phi is even in rho, so samples at negative radii reflect.
    auto v = [&](double r) { return f.value(std::abs(r)); };
    const double fm2 = v(rho - 2 * h), fm1 = v(rho - h), f0 = v(rho), fp1 = v(rho + h), fp2 = v(rho + 2 * h);
    const double dd = (-fp2 + 16 * fp1 - 30 * f0 + 16 * fm1 - fm2) / (12 * h * h);
    double lap;
    if (rho == 0.0) {
        lap = 2.0 * dd;
    } else {
        const double d = (-fp2 + 8 * fp1 - 8 * fm1 + fm2) / (12 * h);
        lap = dd + d / rho;
    }
    const double q = 1.0 + rho * rho;
    return 0.5 * kPi * q * q * lap;
}

double integral_phi(const TestFunction& f) {
    const auto bps = f.volume_breakpoints();
    const auto r = integrate_interval(
        [&](double u) { return u >= 1.0 ? f.value(ChartPoint::infinity()) : f.value(radius_of_volume(u)); },
        0.0, 1.0, 1e-13, 1e-15, bps);
    return r.value;
}

double integral_l_squared(const TestFunction& f) {
    if (f.is_constant()) return 0.0;
    const auto bps = f.volume_breakpoints();
    const double top = std::isfinite(f.support_radius()) ? volume_of_radius(f.support_radius()) : 1.0;
    std::vector<double> inner;
    for (double b : bps)
        if (b < top) inner.push_back(b);
    const auto r = integrate_interval(
        [&](double u) {
            if (u >= 1.0) return 0.0;
            const double l = l_of_phi(f, radius_of_volume(u));
            return l * l;
        },
        0.0, top, 1e-12, 1e-15, inner);
    return r.value;
}

} // namespace tzl
