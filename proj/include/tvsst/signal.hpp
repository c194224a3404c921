#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace tvsst {

// Uniformly sampled time series. Samples are stored as complex values; for a
// real signal every imaginary part is exactly zero and is_real is set.
// Sample n sits at time t0 + n / sample_rate. Values are immutable by
// convention once constructed and safe to share across threads.
struct Signal {
    std::vector<std::complex<double>> samples;
    double sample_rate = 1.0;
    double t0 = 0.0;
    bool is_real = true;

    std::size_t size() const { return samples.size(); }
    double dt() const { return 1.0 / sample_rate; }
    double time_at(std::size_t n) const { return t0 + static_cast<double>(n) / sample_rate; }
    double duration() const { return static_cast<double>(size() - 1) / sample_rate; }
};

Signal make_signal(std::vector<std::complex<double>> samples, double sample_rate, double t0 = 0.0);
Signal make_real_signal(const std::vector<double>& samples, double sample_rate, double t0 = 0.0);

// One linear-frequency-modulation mode: amplitude A exp(p t + q t^2 / 2) and
// phase 2 pi (c t + r t^2 / 2), so the instantaneous frequency is c + r t.
struct LfmComponent {
    double amplitude = 1.0;
    double c = 1.0;  // start frequency, Hz
    double r = 0.0;  // chirp rate, Hz/s
    double p = 0.0;  // amplitude growth, 1/s
    double q = 0.0;  // amplitude curvature, 1/s^2

    std::complex<double> eval(double t) const;
};

// Ground-truth instantaneous frequency law of one component: phi1(t) is the
// IF in Hz, phi2(t) its derivative in Hz/s. Law sets passed to the
// separability operations must be sorted so phi1 values increase with k.
struct IfLaw {
    std::function<double(double)> phi1;
    std::function<double(double)> phi2;
};

IfLaw lfm_law(double c, double r);

// Two crossing-free linear chirps cos(2 pi (12 t + 25 t^2)) +
// cos(2 pi (34 t + 32 t^2)) sampled uniformly on [0, 1).
Signal gen_two_chirps(std::size_t n_samples);
std::vector<Signal> two_chirps_components(std::size_t n_samples);
std::vector<IfLaw> two_chirps_laws();

// Tone plus two sinusoidally modulated modes:
// cos(16 pi t) + cos(96 pi t + 30 cos(4 pi t)) + cos(180 pi t + 30 cos(4 pi t)).
Signal gen_three_component(std::size_t n_samples);
std::vector<Signal> three_component_components(std::size_t n_samples);
std::vector<IfLaw> three_component_laws();

// Complex tone A exp(i 2 pi f t) or its real part, on [0, 1).
Signal gen_tone(std::size_t n_samples, double freq, double amplitude = 1.0, bool analytic = false);

// Analytic linear chirp from an LfmComponent, sampled on [0, 1).
Signal gen_lfm(std::size_t n_samples, const LfmComponent& comp);

// Adds zero-mean white Gaussian noise scaled so that
// 10 log10(signal power / noise power) = snr_db, using total signal power.
// Deterministic for a fixed seed: mt19937_64 drives a Box-Muller transform
// with uniforms built as ((x >> 11) + 1) * 2^-53.
Signal add_noise(const Signal& x, double snr_db, std::uint64_t seed);

// Reads a signal from CSV: one value per line (real) or "re,im" (complex).
// Lines starting with '#' are comments; "# sample_rate=<Hz>" sets the rate.
// A rate passed by the caller overrides the header.
Signal load_csv(const std::string& path, std::optional<double> sample_rate_override = std::nullopt);

}  // namespace tvsst
