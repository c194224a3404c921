#pragma once

#include <optional>
#include <vector>

#include "tvsst/signal.hpp"
#include "tvsst/wavelet.hpp"

namespace tvsst {

// Instantaneous frequency (Hz) and chirp rate (Hz/s) of one component at a
// fixed time.
struct IfSample {
    double phi1 = 0.0;
    double phi2 = 0.0;
};

std::vector<IfSample> eval_laws(const std::vector<IfLaw>& laws, double b);

// Scale-axis support zone [lower, upper] of one component, from the additive
// bound 1/(a sigma) + 2 pi |phi2| a sigma on the chirp window width. Throws
// when the upper-bound radicand is negative (the chirp is too fast for this
// window width).
struct ZoneBounds {
    double lower = 0.0;
    double upper = 0.0;
};

ZoneBounds zone_bounds(double phi1, double phi2, double sigma, const WaveletParams& params);

// Quadratic coefficients of the pairwise non-overlap condition
// alpha_k sigma^2 - beta_k sigma + gamma_k <= 0 for one adjacent pair,
// with discriminant upsilon_k = beta_k^2 - 4 alpha_k gamma_k.
struct ZoneCoefficients {
    double alpha_k = 0.0;
    double beta_k = 0.0;
    double gamma_k = 0.0;
    double upsilon_k = 0.0;

    static ZoneCoefficients make(const IfSample& lo, const IfSample& hi,
                                 const WaveletParams& params);
};

// Smallest window width separating all adjacent pairs under the sinusoidal
// model: max_k (alpha/mu) (phi1_k + phi1_{k-1}) / (phi1_k - phi1_{k-1}).
// Throws when adjacent frequencies coincide.
double sigma1(const std::vector<IfLaw>& laws, double b, const WaveletParams& params);

// Chirp-model window width selection. sigma is empty when some pair cannot
// be separated (negative discriminant, crossing laws, or an empty admissible
// interval across pairs). cond1_holds reports whether
// 4 alpha sqrt(pi) sqrt(|phi2_k| + |phi2_{k-1}|) <= phi1_k - phi1_{k-1}
// holds for every chirping pair.
struct Sigma2Result {
    std::optional<double> sigma;
    bool cond1_holds = false;
    std::vector<ZoneCoefficients> pairs;
};

Sigma2Result sigma2(const std::vector<IfLaw>& laws, double b, const WaveletParams& params);

// Zone non-overlap test at a given width: for every adjacent pair the upper
// bound of the higher-frequency component must not exceed the lower bound of
// the one below it. margins[k] = lower(pair low) - upper(pair high).
struct SeparationCheck {
    bool separated = true;
    std::vector<double> margins;
};

SeparationCheck check_separated(const std::vector<IfLaw>& laws, double sigma, double b,
                                const WaveletParams& params);

}  // namespace tvsst
