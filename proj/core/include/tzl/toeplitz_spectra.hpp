#pragma once

// Spectra of Berezin-Toeplitz operators T_{f,p} = P_p M_f on H^0(CP^1, O(p)).
//
// Radial symbols are diagonal in the monomial basis, with
//   lambda_j = (p+1) C(p,j) int_0^inf f(sqrt t) t^j / (1+t)^{p+2} dt
//            = (p+1) C(p,j) int_0^1 f(u) u^j (1-u)^{p-j} du      (u = t/(1+t)),
// so eigenvalue j is the average of f against a Beta(j+1, p-j+1) law in the
// volume coordinate. Closed forms exist for f_k, exp(-1/|z|^2) (as a 1-D
// integral) and disc indicators; everything else goes through quadrature or
// the dense Hermitian path.

#include "tzl/hermitian_eigen.hpp"
#include "tzl/symbol.hpp"

#include <optional>
#include <string>
#include <vector>

namespace tzl {

enum class SpectrumMethod { closed_form, quadrature, dense };

std::string to_string(SpectrumMethod m);

struct ToeplitzSpectrum {
    int p = 0;
    /// lambdas[j] is the eigenvalue on S^p_j (basis order) for radial
    /// symbols; ascending order for the dense path.
    std::vector<double> lambdas;
    /// log lambda_j; finite even when lambdas[j] underflows.
    std::vector<double> log_lambdas;
    SymbolSpec symbol;
    SpectrumMethod method = SpectrumMethod::closed_form;
    /// Set when some lambda_j < 1e-300; the log form stays exact.
    bool underflow = false;
    /// Largest quadrature error estimate (relative), 0 for closed forms.
    double achieved_tol = 0.0;

    int size() const noexcept { return p + 1; }
    double min() const;
    double max() const;
};

/// f_k: lambda_j = ((j+k)!/j!) ((p+1)!/(k+p+1)!), as a telescoping product.
ToeplitzSpectrum spectrum_power(int p, int k);

/// 1_{D(0,r)}: lambda_j = P(Binomial(p+1, Vol) >= j+1), Vol = r^2/(1+r^2),
/// summed in the log domain.
ToeplitzSpectrum spectrum_indicator(int p, double r);

/// exp(-1/|z|^2): lambda_j = int_0^inf e^{-t} (t/(1+t))^{p+1} (1+t)^j / j! dt.
ToeplitzSpectrum spectrum_expinv(int p, double rel_tol = 1e-12);

/// lambda_max for exp(-1/|z|^2) by the alternating factorial sum
///   1 + sum_{j=1}^p (-1)^j (p-j)!/p! + (-1)^{p+1} e E1(1) / p!.
/// Terms decay factorially, so there is no catastrophic cancellation.
double expinv_lambda_max_alternating(int p);

/// Generic radial oracle via quadrature in the volume coordinate.
ToeplitzSpectrum spectrum_quadrature(int p, const SymbolSpec& f, double rel_tol = 1e-13);

/// Closed form when one exists, quadrature otherwise (radial symbols only).
ToeplitzSpectrum spectrum(int p, const SymbolSpec& f);

struct DenseToeplitz {
    ComplexMatrix matrix;  // H(k, j) = <f S_j, S_k>
    ToeplitzSpectrum spectrum;
};

/// Matrix elements by 2-D chart quadrature, eigenvalues by cyclic Jacobi.
/// p <= 100.
DenseToeplitz toeplitz_matrix_general(int p, const SymbolSpec& f);

struct SpectralSummary {
    double min = 0.0;
    double max = 0.0;
    double trace = 0.0;
    double trace_target = 0.0;  // (p+1) int f dV
};

SpectralSummary spectral_summary(const ToeplitzSpectrum& s);

struct MinEigRow {
    int p = 0;
    double lambda_min = 0.0;
    double log_lambda_min = 0.0;
    /// PowerVanish: lambda_min p^k / k! - (1 + k(k+3)/(2p)).
    /// ExpInverse: -log(lambda_min) / sqrt(p).
    /// DiscIndicator: lambda_min / Vol^{p+1}.
    double statistic = 0.0;
    /// ExpInverse only: exp(-2 sqrt p - 1/sqrt p) <= lambda_min.
    std::optional<bool> lower_bound_holds;
    /// PowerVanish only: lambda_min p^k / k! - (1 - k(k+3)/(2p)), the
    /// expansion of prod_{i=1..k} p / (p+1+i); it is O(p^-2).
    std::optional<double> corrected_statistic;
};

std::vector<MinEigRow> min_eig_asymptotics(const SymbolSpec& symbol, const std::vector<int>& p_list);

struct WeylReport {
    bool dominated = true;
    double worst_gap = 0.0;  // max_j (lambda_j(f1) - lambda_j(f2)), sorted
    std::vector<double> sorted1;
    std::vector<double> sorted2;
};

/// Checks f1 <= f2 on a radial (or polar, for grids) sample grid, then the
/// sorted-eigenvalue dominance. Throws PreconditionError if f1 <= f2 fails.
WeylReport weyl_monotonicity_check(const SymbolSpec& f1, const SymbolSpec& f2, int p,
                                   double slack = 1e-12);

struct SpectralCdfRow {
    double threshold = 0.0;
    double fraction_above = 0.0;  // #{lambda_j > a} / (p+1)
    double limit_volume = 0.0;    // Vol({f > a})
};

std::vector<SpectralCdfRow> spectral_cdf_compare(const SymbolSpec& symbol, int p,
                                                 const std::vector<double>& thresholds);

} // namespace tzl
