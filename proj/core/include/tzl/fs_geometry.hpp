#pragma once

// Fubini-Study geometry of the Riemann sphere in the standard chart
// U0 = C, with the point at infinity carried as an explicit tag.
//
// Normalization: omega_FS has total volume 1, so
//   Vol(D(0, r))  = r^2 / (1 + r^2),
//   r_FS(z)       = arctan|z| / sqrt(pi)           in [0, sqrt(pi)/2],
//   psi(r_FS)     = sqrt(pi) sin(2 sqrt(pi) r_FS)  (radial density of omega_FS),
//   Psi(r_FS)     = sin^2(sqrt(pi) r_FS)           (its distribution function).

#include <complex>

namespace tzl {

using complex = std::complex<double>;

class ChartPoint {
public:
    ChartPoint() = default;

    static ChartPoint finite(complex z);
    static ChartPoint finite(double re, double im = 0.0) { return finite(complex(re, im)); }
    static ChartPoint infinity() noexcept;

    bool is_infinity() const noexcept { return at_infinity_; }
    /// Coordinate in U0. Throws PreconditionError for the point at infinity.
    complex coord() const;
    /// |z|, +inf at infinity.
    double modulus() const noexcept;

    friend bool operator==(const ChartPoint&, const ChartPoint&) = default;

private:
    complex z_{0.0, 0.0};
    bool at_infinity_ = false;
};

/// Diameter of (CP^1, g_FS): the FS norm of the point at infinity.
double fs_diameter() noexcept;

double fs_norm(const ChartPoint& z) noexcept;
double fs_norm_of_modulus(double modulus) noexcept;

double fs_density(double r_fs);
double fs_cdf(double r_fs);
/// Inverse of fs_cdf on [0, 1].
double fs_inverse_cdf(double u);

/// Fubini-Study volume of the chart disc D(0, r).
double disc_volume(double r);

/// Geodesic distance on (CP^1, g_FS):
///   dist(z, w) = arctan(|z - w| / |1 + conj(z) w|) / sqrt(pi).
double fs_distance(const ChartPoint& z, const ChartPoint& w) noexcept;

/// Chart modulus whose FS norm is r_fs (inverse of fs_norm along a ray).
double chart_radius_of_fs_norm(double r_fs);

/// SU(2) isometry mapping 0 to `base`: u -> (u + base) / (1 - conj(base) u).
ChartPoint translate_from_origin(const ChartPoint& base, complex u);

} // namespace tzl
