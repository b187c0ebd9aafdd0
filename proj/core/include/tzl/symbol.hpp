#pragma once

// Symbols f >= 0 on CP^1 used to build Toeplitz operators T_{f,p}.
//
// Radial symbols are written as functions of the chart modulus rho = |z|.
// Most radial integrals are taken in the volume coordinate
//   u = rho^2 / (1 + rho^2) = Vol(D(0, rho)),
// in which omega_FS restricted to radial functions is Lebesgue measure on
// [0, 1].

#include "tzl/fs_geometry.hpp"

#include <string>
#include <variant>
#include <vector>

namespace tzl::symbols {

struct Constant {
    double c = 1.0;
};
/// f_k(z) = |z|^{2k} / (1 + |z|^2)^k.
struct PowerVanish {
    int k = 1;
};
/// f(z) = exp(-1 / |z|^2).
struct ExpInverse {};
/// Indicator of the open chart disc D(0, r).
struct DiscIndicator {
    double r = 1.0;
};
/// Piecewise-linear in rho between samples, constant beyond the last one.
struct RadialTabulated {
    std::vector<double> radii;   // strictly increasing, radii[0] >= 0
    std::vector<double> values;  // >= 0
};
/// Values on a polar chart grid: radii x uniformly spaced angles
/// theta_m = 2 pi m / n_angles. Bilinear (periodic in theta), constant in
/// rho beyond the last radius and below the first.
struct GeneralGrid {
    std::vector<double> radii;
    int n_angles = 0;
    std::vector<double> values;  // row-major [radius][angle]
};

} // namespace tzl::symbols

namespace tzl {

class SymbolSpec {
public:
    using Variant = std::variant<symbols::Constant, symbols::PowerVanish, symbols::ExpInverse,
                                 symbols::DiscIndicator, symbols::RadialTabulated,
                                 symbols::GeneralGrid>;

    SymbolSpec(Variant v, double scale = 1.0);

    static SymbolSpec constant(double c) { return SymbolSpec(symbols::Constant{c}); }
    static SymbolSpec power_vanish(int k) { return SymbolSpec(symbols::PowerVanish{k}); }
    static SymbolSpec exp_inverse() { return SymbolSpec(symbols::ExpInverse{}); }
    static SymbolSpec disc(double r) { return SymbolSpec(symbols::DiscIndicator{r}); }

    /// Same symbol multiplied by factor >= 0.
    SymbolSpec scaled(double factor) const;

    const Variant& variant() const noexcept { return v_; }
    double scale() const noexcept { return scale_; }

    bool is_radial() const noexcept;
    /// f at a chart point (point at infinity via the rho -> inf limit).
    double value(const ChartPoint& z) const;
    /// Radial profile f(rho); requires is_radial().
    double radial_value(double rho) const;
    /// Radial profile in the volume coordinate u in [0, 1].
    double value_at_volume(double u) const;
    /// ess-sup f.
    double sup_norm() const;
    /// Points u in (0, 1) where the radial profile is discontinuous or kinked.
    std::vector<double> volume_breakpoints() const;
    /// integral of f against omega_FS.
    double integral() const;
    /// Vol({f > a}) for a radial symbol.
    double superlevel_volume(double a) const;
    /// True when f is identically zero.
    bool is_trivial() const;

    /// Text form used by the CLI: const:<c>, power:<k>, expinv, disc:<r>,
    /// optionally prefixed by <factor>* (e.g. 0.5*disc:1).
    std::string to_string() const;
    static SymbolSpec parse(const std::string& text);

private:
    Variant v_;
    double scale_ = 1.0;
};

} // namespace tzl
