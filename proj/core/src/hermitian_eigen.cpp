#include "tzl/hermitian_eigen.hpp"

#include "tzl/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tzl {

using cplx = std::complex<double>;

double ComplexMatrix::hermitian_defect() const {
    double d = 0.0;
    for (std::size_t r = 0; r < n_; ++r)
        for (std::size_t c = 0; c < n_; ++c)
            d = std::max(d, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
    return d;
}

double ComplexMatrix::max_off_diagonal() const {
    double d = 0.0;
    for (std::size_t r = 0; r < n_; ++r)
        for (std::size_t c = 0; c < n_; ++c)
            if (r != c) d = std::max(d, std::abs((*this)(r, c)));
    return d;
}

EigenResult jacobi_eigen_hermitian(ComplexMatrix a, double tol, int max_sweeps) {
    const std::size_t n = a.size();
    require(a.hermitian_defect() <= 1e-10 * (1.0 + a.max_off_diagonal()),
            "jacobi_eigen_hermitian: matrix is not Hermitian");
    // Symmetrize exactly so rounding cannot leak imaginary parts onto the diagonal.
    for (std::size_t r = 0; r < n; ++r) {
        a(r, r) = a(r, r).real();
        for (std::size_t c = r + 1; c < n; ++c) {
            const cplx avg = 0.5 * (a(r, c) + std::conj(a(c, r)));
            a(r, c) = avg;
            a(c, r) = std::conj(avg);
        }
    }

    ComplexMatrix v(n);
    for (std::size_t i = 0; i < n; ++i) v(i, i) = 1.0;

    auto off_norm2 = [&] {
        double s = 0.0;
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c)
                if (r != c) s += std::norm(a(r, c));
        return s;
    };
    double total2 = 0.0;
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) total2 += std::norm(a(r, c));
    const double target2 = tol * tol * std::max(total2, 1e-300);

    int sweep = 0;
    for (; sweep < max_sweeps; ++sweep) {
        if (off_norm2() <= target2) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double g = std::abs(a(p, q));
                if (g == 0.0) continue;
                const cplx phase = a(p, q) / g;  // e^{i alpha}
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * g);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                // J = [[c, s e^{ia}], [-s e^{-ia}, c]] on (p, q); A <- J^H A J.
                const cplx jpq = s * phase;
                const cplx jqp = -s * std::conj(phase);
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx akp = a(k, p);
                    const cplx akq = a(k, q);
                    a(k, p) = c * akp + jqp * akq;
                    a(k, q) = jpq * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx apk = a(p, k);
                    const cplx aqk = a(q, k);
                    a(p, k) = c * apk + std::conj(jqp) * aqk;
                    a(q, k) = std::conj(jpq) * apk + c * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx vkp = v(k, p);
                    const cplx vkq = v(k, q);
                    v(k, p) = c * vkp + jqp * vkq;
                    v(k, q) = jpq * vkp + c * vkq;
                }
            }
        }
    }
    const double off2 = off_norm2();
    if (off2 > target2)
        throw ConvergenceError("jacobi_eigen_hermitian: no convergence after " +
                                   std::to_string(max_sweeps) + " sweeps",
                               std::sqrt(off2 / std::max(total2, 1e-300)));

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });
    EigenResult out;
    out.sweeps = sweep;
    out.values.resize(n);
    out.vectors = ComplexMatrix(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.values[i] = a(order[i], order[i]).real();
        for (std::size_t k = 0; k < n; ++k) out.vectors(k, i) = v(k, order[i]);
    }
    return out;
}

} // namespace tzl
