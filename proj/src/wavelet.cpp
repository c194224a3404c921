#include "tvsst/wavelet.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tvsst {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPiSq = 2.0 * kPi * kPi;

double cpsi_integrand(double xi, double sigma, double mu) {
    double d = xi - mu;
    return std::exp(-kTwoPiSq * sigma * sigma * d * d) / xi;
}

// Recursive adaptive trapezoid with Richardson correction.
double adaptive_trapezoid(double lo, double hi, double flo, double fhi, double whole, double tol,
                          int depth, double sigma, double mu) {
    double mid = 0.5 * (lo + hi);
    double fmid = cpsi_integrand(mid, sigma, mu);
    double left = 0.25 * (hi - lo) * (flo + fmid);
    double right = 0.25 * (hi - lo) * (fmid + fhi);
    double sum = left + right;
    if (depth <= 0 || std::abs(sum - whole) <= 3.0 * tol) {
        return sum + (sum - whole) / 3.0;
    }
    return adaptive_trapezoid(lo, mid, flo, fmid, left, 0.5 * tol, depth - 1, sigma, mu) +
           adaptive_trapezoid(mid, hi, fmid, fhi, right, 0.5 * tol, depth - 1, sigma, mu);
}

}  // namespace

WaveletParams WaveletParams::make(double mu, double tau0) {
    if (!(mu > 0.0)) {
        throw std::invalid_argument("WaveletParams: mu must be positive");
    }
    WaveletParams p;
    p.mu = mu;
    p.tau0 = tau0;
    p.alpha = alpha_from_tau0(tau0);
    return p;
}

double alpha_from_tau0(double tau0) {
    if (!(tau0 > 0.0 && tau0 < 1.0)) {
        throw std::invalid_argument("alpha_from_tau0: tau0 must lie in (0, 1)");
    }
    return std::sqrt(2.0 * std::log(1.0 / tau0)) / (2.0 * kPi);
}

double g_hat(double xi) { return std::exp(-kTwoPiSq * xi * xi); }

std::complex<double> g1_hat(double xi) {
    // FT[t g(t)](xi) = (i / 2pi) d/dxi g_hat(xi) = -i 2 pi xi exp(-2 pi^2 xi^2)
    return {0.0, -2.0 * kPi * xi * g_hat(xi)};
}

double g2_hat(double xi) {
    // FT[t g'(t)](xi) = -g_hat(xi) - xi g_hat'(xi) = (4 pi^2 xi^2 - 1) exp(-2 pi^2 xi^2)
    return (4.0 * kPi * kPi * xi * xi - 1.0) * g_hat(xi);
}

double psi_hat(double xi, double sigma, const WaveletParams& params) {
    if (sigma < params.sigma_min() - 1e-12) {
        throw std::invalid_argument("psi_hat: sigma below alpha/mu");
    }
    return g_hat(sigma * (xi - params.mu));
}

double window_duration(double a, double sigma, const WaveletParams& params) {
    return 4.0 * kPi * params.alpha * sigma * a;
}

double c_psi(double sigma, const WaveletParams& params) {
    if (sigma < params.sigma_min() - 1e-12) {
        throw std::invalid_argument("c_psi: sigma below alpha/mu");
    }
    // psi_hat falls below 1e-16 once |xi - mu| > w.
    double w = std::sqrt(std::log(1e16) / kTwoPiSq) / sigma;
    double lo = std::max(params.mu - w, 1e-4 * params.mu);
    double hi = params.mu + w;
    double flo = cpsi_integrand(lo, sigma, params.mu);
    double fhi = cpsi_integrand(hi, sigma, params.mu);
    double whole = 0.5 * (hi - lo) * (flo + fhi);
    double value = adaptive_trapezoid(lo, hi, flo, fhi, whole, 1e-12, 48, sigma, params.mu);
    if (!std::isfinite(value)) {
        throw std::runtime_error("c_psi: quadrature produced a non-finite value");
    }
    return value;
}

}  // namespace tvsst
