#pragma once

#include <Eigen/Dense>
#include <span>
#include <utility>
#include <vector>

#include "tvsst/cwt.hpp"
#include "tvsst/sst.hpp"
#include "tvsst/signal.hpp"
#include "tvsst/wavelet.hpp"

namespace tvsst {

// Uniform, decreasing window-width grid sigma_1 > sigma_2 > ... > sigma_n,
// all strictly above alpha/mu.
struct SigmaGrid {
    std::vector<double> values;
    double step = 0.0;

    static SigmaGrid make(double sigma_hi, double sigma_lo, double step,
                          const WaveletParams& params);

    Eigen::Index size() const { return static_cast<Eigen::Index>(values.size()); }
    double smallest() const { return values.back(); }
    double largest() const { return values.front(); }
};

// Per-width magnitude planes |W(a, b; sigma_j)| shared by the parameter
// search. Stored in single precision; the search only compares magnitudes.
struct CwtMagnitudeStack {
    std::vector<Eigen::MatrixXf> mag;
    std::vector<double> plane_max;
    SigmaGrid sigmas;
    ScaleGrid scales;
    double sample_rate = 1.0;
    double t0 = 0.0;

    Eigen::Index n_times() const { return mag.empty() ? 0 : mag.front().cols(); }
};

CwtMagnitudeStack compute_cwt_stack(const Signal& x, const SigmaGrid& sigmas,
                                    const ScaleGrid& scales, const WaveletParams& params);

// Concentration measure of a time-frequency (or time-scale) representation
// over the columns [t - zeta, t + zeta] clipped to the plane:
//   (1 / (1 - ell)) log2( sum |D|^{2 ell} / (sum |D|^2)^ell )
// with unit cell measure. Lower is sharper. Throws on an all-zero window.
double renyi_entropy(const Eigen::MatrixXf& mag, Eigen::Index t, Eigen::Index zeta, double ell);
double renyi_entropy(const TimeScalePlane& plane, Eigen::Index t, Eigen::Index zeta, double ell);
double renyi_entropy(const TimeFreqPlane& plane, Eigen::Index t, Eigen::Index zeta, double ell);

// Entropy-minimizing width at one time; ties resolve to the smallest width.
// Returns the width and its index into the grid.
std::pair<double, Eigen::Index> sigma_u(const CwtMagnitudeStack& stack, Eigen::Index t,
                                        Eigen::Index zeta, double ell);

// One detected component at a fixed (time, width): scale support interval
// [lower, upper], the peak scale, and the ridge-fitted frequency and chirp
// rate.
struct SupportInterval {
    double lower = 0.0;
    double upper = 0.0;
    double peak_scale = 0.0;
    double c_hat = 0.0;  // Hz
    double r_hat = 0.0;  // Hz/s
};

struct SupportIntervals {
    std::vector<SupportInterval> items;
    // false when some interval's upper-bound radicand went negative (zone
    // undefined at this width); callers treat that as overlap.
    bool zone_defined = true;

    bool nonoverlapping() const;
};

// Peaks of |W(., t; sigma)| above gamma3 relative to the plane maximum, each
// extended to a local ridge over one window duration, fitted by a linear
// frequency law, and converted to scale support bounds.
SupportIntervals support_intervals(const CwtMagnitudeStack& stack, Eigen::Index sigma_index,
                                   Eigen::Index t, double gamma3, const WaveletParams& params);

// Output of the blind parameter search: the entropy bound sigma_u(t), the raw
// per-time selection C(t), and its smoothed version sigma_est = C * B.
struct SigmaTrack {
    std::vector<double> sigma_u;
    std::vector<double> raw;
    std::vector<double> smoothed;
    std::vector<double> weights;
};

// Blind selection of the time-varying width. Per time t: start from
// sigma_u(t); if the support intervals there are non-overlapping, lower the
// width step by step while the interval count is unchanged and the intervals
// stay disjoint; record the last accepted width; finally smooth with the
// low-pass weights (edge samples replicated).
SigmaTrack estimate_sigma(const CwtMagnitudeStack& stack, Eigen::Index zeta, double ell,
                          double gamma3, std::span<const double> smoothing_weights,
                          const WaveletParams& params);
SigmaTrack estimate_sigma(const Signal& x, const SigmaGrid& sigmas, const ScaleGrid& scales,
                          Eigen::Index zeta, double ell, double gamma3,
                          std::span<const double> smoothing_weights, const WaveletParams& params);

enum class SstOrder { First, Second };

// Per-time width minimizing the entropy of the fixed-width synchrosqueezed
// transform (first- or second-order phase transform with sigma' = 0).
std::vector<double> sigma_renyi_sst(const Signal& x, const SigmaGrid& sigmas,
                                    const ScaleGrid& scales, Eigen::Index zeta, double ell,
                                    SstOrder order, const WaveletParams& params);

}  // namespace tvsst
