#pragma once

#include <Eigen/Dense>
#include <vector>

#include "tvsst/cwt.hpp"
#include "tvsst/sst.hpp"
#include "tvsst/signal.hpp"
#include "tvsst/wavelet.hpp"

namespace tvsst {

enum class RecoveryMode { Analytic, Real };

// Full-signal recovery. From a time-scale plane:
//   x(b) = (1 / c_psi(b)) sum_j W(a_j, b) da_j / a_j      (analytic)
//   x(b) = Re[(2 / c_psi(b)) sum_j W(a_j, b) da_j / a_j]  (real)
// From a squeezed plane the bin sum replaces the scale sum with unit weight,
// since each bin already carries the da/a measure of its cells. c_psi(b) is
// evaluated from the plane's sigma track and cached per distinct width.
Signal recover_signal(const TimeScalePlane& plane, const WaveletParams& params, RecoveryMode mode);
Signal recover_signal(const TimeFreqPlane& plane, const WaveletParams& params, RecoveryMode mode);

// Ridges extracted greedily from a squeezed plane: repeatedly take the
// largest remaining cell, link it across time with a per-step jump limit,
// then retire a band of +-2*band bins around the ridge. complete is false
// when fewer ridges than requested could be found.
struct RidgeSet {
    std::vector<std::vector<Eigen::Index>> bins;
    Eigen::Index band = 2;
    bool complete = true;
};

RidgeSet extract_ridges(const TimeFreqPlane& tf, std::size_t n_components, Eigen::Index band,
                        Eigen::Index max_jump = 3);

// One recovered component and the ridge frequencies (bin left edges) it was
// integrated around.
struct Component {
    Signal signal;
    std::vector<double> ridge_freq;
};

// Band recovery around a ridge:
//   x_k(b) = Re[(2 / c_psi(b)) sum_{|bin - ridge_b| <= band} T(bin, b)]
// (or the analytic variant without Re and the factor 2).
Component recover_component(const TimeFreqPlane& tf, const std::vector<Eigen::Index>& ridge,
                            Eigen::Index band, const WaveletParams& params,
                            RecoveryMode mode = RecoveryMode::Real);

// Relative root-mean-square error ||ref - test|| / ||ref|| over samples whose
// times fall in [t_lo, t_hi].
double relative_rmse(const Signal& ref, const Signal& test, double t_lo, double t_hi);

}  // namespace tvsst
