#include "tzl/fs_geometry.hpp"

#include "tzl/error.hpp"
#include "tzl/numeric.hpp"

#include <cmath>
#include <limits>

namespace tzl {

namespace {

// Range checks tolerate a few ulps so that values produced by fs_norm at the
// poles are always accepted.
constexpr double kRangeSlack = 8.0 * std::numeric_limits<double>::epsilon();

void check_fs_range(double r, const char* who) {
    require(std::isfinite(r) && r >= 0.0 && r <= fs_diameter() * (1.0 + kRangeSlack),
            std::string(who) + ": r_FS must lie in [0, sqrt(pi)/2]");
}

} // namespace

ChartPoint ChartPoint::finite(complex z) {
    require(std::isfinite(z.real()) && std::isfinite(z.imag()),
            "ChartPoint: finite coordinates required (use ChartPoint::infinity())");
    ChartPoint p;
    p.z_ = z;
    return p;
}

ChartPoint ChartPoint::infinity() noexcept {
    ChartPoint p;
    p.at_infinity_ = true;
    return p;
}

complex ChartPoint::coord() const {
    require(!at_infinity_, "ChartPoint: the point at infinity has no U0 coordinate");
    return z_;
}

double ChartPoint::modulus() const noexcept {
    return at_infinity_ ? std::numeric_limits<double>::infinity() : std::abs(z_);
}

double fs_diameter() noexcept { return (kPi / 2.0) / kSqrtPi; }

double fs_norm_of_modulus(double modulus) noexcept {
    if (std::isinf(modulus)) return fs_diameter();
    return std::atan(modulus) / kSqrtPi;
}

double fs_norm(const ChartPoint& z) noexcept { return fs_norm_of_modulus(z.modulus()); }

double fs_density(double r_fs) {
    check_fs_range(r_fs, "fs_density");
    return kSqrtPi * std::sin(2.0 * kSqrtPi * r_fs);
}

double fs_cdf(double r_fs) {
    check_fs_range(r_fs, "fs_cdf");
    if (r_fs >= fs_diameter()) return 1.0;
    const double s = std::sin(kSqrtPi * r_fs);
    return s * s;
}

double fs_inverse_cdf(double u) {
    require(u >= 0.0 && u <= 1.0, "fs_inverse_cdf: u must lie in [0, 1]");
    return std::asin(std::sqrt(u)) / kSqrtPi;
}

double disc_volume(double r) {
    require(!(r < 0.0) && !std::isnan(r), "disc_volume: radius must be nonnegative");
    if (std::isinf(r)) return 1.0;
    const double r2 = r * r;
    return r2 / (1.0 + r2);
}

double fs_distance(const ChartPoint& z, const ChartPoint& w) noexcept {
    if (z.is_infinity() && w.is_infinity()) return 0.0;
    if (z.is_infinity()) return (kPi / 2.0 - std::atan(w.modulus())) / kSqrtPi;
    if (w.is_infinity()) return (kPi / 2.0 - std::atan(z.modulus())) / kSqrtPi;
    const complex a = z.coord();
    const complex b = w.coord();
    return std::atan2(std::abs(a - b), std::abs(1.0 + std::conj(a) * b)) / kSqrtPi;
}

double chart_radius_of_fs_norm(double r_fs) {
    check_fs_range(r_fs, "chart_radius_of_fs_norm");
    if (r_fs >= fs_diameter()) return std::numeric_limits<double>::infinity();
    return std::tan(kSqrtPi * r_fs);
}

ChartPoint translate_from_origin(const ChartPoint& base, complex u) {
    if (base.is_infinity()) {
        if (u == complex(0.0, 0.0)) return ChartPoint::infinity();
        return ChartPoint::finite(-1.0 / u);
    }
    const complex z = base.coord();
    const complex den = 1.0 - std::conj(z) * u;
    if (den == complex(0.0, 0.0)) return ChartPoint::infinity();
    return ChartPoint::finite((u + z) / den);
}

} // namespace tzl
