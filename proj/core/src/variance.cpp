#include "tzl/variance.hpp"

#include "tzl/error.hpp"
#include "tzl/gaussian_sampler.hpp"
#include "tzl/numeric.hpp"
#include "tzl/parallel.hpp"
#include "tzl/quadrature.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <vector>

namespace tzl {

namespace {

std::mutex& planner_mutex() {
    static std::mutex mu;
    return mu;
}

// Owns one in-place backward FFT of size m.
class AngularFft {
public:
    explicit AngularFft(int m) : m_(m) {
        buf_ = fftw_alloc_complex(static_cast<std::size_t>(m));
        std::lock_guard<std::mutex> lock(planner_mutex());
        plan_ = fftw_plan_dft_1d(m, buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    ~AngularFft() {
        {
            std::lock_guard<std::mutex> lock(planner_mutex());
            fftw_destroy_plan(plan_);
        }
        fftw_free(buf_);
    }
    AngularFft(const AngularFft&) = delete;
    AngularFft& operator=(const AngularFft&) = delete;

    fftw_complex* data() { return buf_; }
    void run() { fftw_execute(plan_); }
    int size() const { return m_; }

private:
    int m_;
    fftw_complex* buf_ = nullptr;
    fftw_plan plan_ = nullptr;
};

// G on x = t^2, cheap for small x.
double g_of_square(double x) {
    x = std::clamp(x, 0.0, 1.0);
    if (x < 1e-4) return x * (1.0 + x * (0.25 + x / 9.0)) / (4.0 * kPi * kPi);
    return dilog(x) / (4.0 * kPi * kPi);
}

struct RadialGrid {
    std::vector<double> u, w;
};

RadialGrid make_grid(double top, double width, int order, const std::vector<double>& bps) {
    std::vector<double> edges{0.0};
    const int n = std::max(1, static_cast<int>(std::ceil(top / width)));
    for (int i = 1; i <= n; ++i) edges.push_back(top * i / n);
    for (double b : bps)
        if (b > 0.0 && b < top) edges.push_back(b);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    const auto& rule = gauss_legendre_rule(order);
    RadialGrid g;
    for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
        const double a = edges[e], b = edges[e + 1];
        for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
            g.u.push_back(0.5 * (a + b) + 0.5 * (b - a) * rule.nodes[k]);
            g.w.push_back(0.5 * (b - a) * rule.weights[k]);
        }
    }
    return g;
}

int default_angles(int p) {
    int m = 1;
    while (m < 8 * (p + 1)) m <<= 1;
    return std::max(512, m);
}

double variance_on_grid(const ToeplitzSpectrum& spectrum, const TestFunction& phi, const RadialGrid& grid,
                        int m, int threads) {
    const int p = spectrum.p;
    const KernelEvaluator ev(spectrum);
    const auto lw = ev.log_weights();
    const std::size_t n = grid.u.size();

    // lk = log sum_j W_j rho^{2j}: the diagonal without its frame factor.
    std::vector<double> lrho(n), lk(n), lw_l(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double rho = std::sqrt(grid.u[i] / (1.0 - grid.u[i]));
        lrho[i] = std::log(rho);
        lk[i] = ev.log_diag(ChartPoint::finite(rho)) + p * log1p_square(rho);
        lw_l[i] = grid.w[i] * l_of_phi(phi, rho);
    }

    // Row i accumulates the pairs (i, k), k >= i; off-diagonal pairs count twice.
    std::vector<double> rows(n, 0.0);
    const int workers = std::max(1, threads);
    std::vector<std::unique_ptr<AngularFft>> ffts(static_cast<std::size_t>(workers));
    std::mutex slot_mu;
    std::vector<char> busy(static_cast<std::size_t>(workers), 0);

    parallel_for(n, workers, [&](std::size_t i) {
        if (lw_l[i] == 0.0) return;
        std::size_t slot = 0;
        {
            std::lock_guard<std::mutex> lock(slot_mu);
            while (busy[slot]) ++slot;
            busy[slot] = 1;
            if (!ffts[slot]) ffts[slot] = std::make_unique<AngularFft>(m);
        }
        AngularFft& fft = *ffts[slot];
        std::vector<double> a(p + 1), terms;
        terms.reserve(n - i);
        for (std::size_t k = i; k < n; ++k) {
            if (lw_l[k] == 0.0) continue;
            // A_j = W_j (rho_i rho_k)^j / sqrt(K_i K_k); N(theta) = |sum_j A_j e^{ij theta}|.
            const double lr = lrho[i] + lrho[k];
            const double shift = 0.5 * (lk[i] + lk[k]);
            double s1 = 0.0, s2 = 0.0;
            for (int j = 0; j <= p; ++j) {
                a[j] = lw[j] == kNegInf ? 0.0 : std::exp(lw[j] + j * lr - shift);
                s1 += a[j];
                s2 += a[j] * a[j];
            }
            double gbar;
            if (s1 < 1e-3) {
                // N <= s1 everywhere; mean of N^2 is sum A_j^2 (Parseval).
                gbar = s2 / (4.0 * kPi * kPi);
            } else {
                fftw_complex* b = fft.data();
                for (int t = 0; t < m; ++t) b[t][0] = b[t][1] = 0.0;
                for (int j = 0; j <= p; ++j) b[j % m][0] += a[j];
                fft.run();
                KahanSum acc;
                for (int t = 0; t < m; ++t) acc.add(g_of_square(b[t][0] * b[t][0] + b[t][1] * b[t][1]));
                gbar = acc.value() / m;
            }
            terms.push_back((k == i ? 1.0 : 2.0) * lw_l[k] * gbar);
        }
        rows[i] = lw_l[i] * pairwise_sum(terms);
        std::lock_guard<std::mutex> lock(slot_mu);
        busy[slot] = 0;
    });
    return pairwise_sum(rows);
}

} // namespace

double bipotential_g(double t) {
    require(t >= 0.0 && t <= 1.0 + 1e-12, "bipotential_g: t must lie in [0, 1]");
    return g_of_square(std::min(t, 1.0) * std::min(t, 1.0));
}

VarianceResult variance_bipotential(const ToeplitzSpectrum& spectrum, const TestFunction& phi,
                                    const VarianceOptions& options) {
    require(spectrum.symbol.is_radial(), "variance_bipotential: radial symbol required");
    const int p = spectrum.p;
    VarianceResult res;
    res.angles = options.angles > 0 ? options.angles : default_angles(p);
    require(res.angles >= p + 1, "variance_bipotential: need at least p + 1 angles");
    if (phi.is_constant() || p == 0) return res;

    const double r = phi.support_radius();
    const double top = std::isfinite(r) ? r * r / (1.0 + r * r) : 1.0;
    const double width = std::min(1.0 / 16.0, options.panel_scale / std::sqrt(std::max(1, p)));
    const auto bps = phi.volume_breakpoints();
    const int threads = resolve_threads(options.threads);

    const auto fine = make_grid(top, width, options.panel_order, bps);
    const auto coarse = make_grid(top, 2.0 * width, options.panel_order, bps);
    res.value = variance_on_grid(spectrum, phi, fine, res.angles, threads);
    const double rough = variance_on_grid(spectrum, phi, coarse, res.angles, threads);
    res.achieved_tol = std::abs(res.value - rough);
    res.radial_nodes = static_cast<int>(fine.u.size());
    return res;
}

double variance_leading_term(const TestFunction& phi) {
    return riemann_zeta(3.0) / (4.0 * kPi * kPi) * integral_l_squared(phi);
}

} // namespace tzl
