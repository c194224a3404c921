#pragma once

#include <complex>

namespace tvsst {

// Parameters of the analytic Morlet window family.
//
// mu is the center frequency of the mother wavelet, tau0 the relative
// threshold used to define the effective ("supported") band of the Gaussian
// window, and alpha the resulting half-width of that band in frequency.
// Any window width sigma used with these parameters must satisfy
// sigma >= alpha / mu, which keeps the wavelet numerically analytic.
struct WaveletParams {
    double mu = 1.0;
    double tau0 = 0.2;
    double alpha = 0.0;

    static WaveletParams make(double mu = 1.0, double tau0 = 0.2);

    double sigma_min() const { return alpha / mu; }
};

// Half-width alpha such that g_hat(alpha) == tau0.
double alpha_from_tau0(double tau0);

// Fourier transform of the unit Gaussian window: g_hat(xi) = exp(-2 pi^2 xi^2).
double g_hat(double xi);

// Fourier transform of g1(t) = t g(t); purely imaginary.
std::complex<double> g1_hat(double xi);

// Fourier transform of g2(t) = t g'(t); real.
double g2_hat(double xi);

// Frequency response of the Morlet wavelet with window width sigma:
// psi_hat(xi) = exp(-2 pi^2 sigma^2 (xi - mu)^2). Peak value 1 at xi = mu.
double psi_hat(double xi, double sigma, const WaveletParams& params);

// Effective duration of the analysis window at scale a: L = 4 pi alpha sigma a.
double window_duration(double a, double sigma, const WaveletParams& params);

// Reconstruction constant c_psi = int_0^inf conj(psi_hat(xi)) dxi / xi.
//
// Evaluated by adaptive trapezoid quadrature over the band where the
// integrand is non-negligible: xi in [max(mu - w, 1e-4 mu), mu + w] with
// w chosen so psi_hat < 1e-16 outside. The wavelet is treated as analytic;
// mass below the positive clamp is discarded. Real-valued for this family.
double c_psi(double sigma, const WaveletParams& params);

}  // namespace tvsst
