#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "tvsst/cwt.hpp"

namespace tvsst {

// Per-cell reference instantaneous frequency in Hz, defined where the base
// plane magnitude exceeds the threshold gamma. Invalid cells are excluded
// from squeezing.
struct PhasePlane {
    Eigen::MatrixXd omega;
    Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> valid;
    double gamma = 0.0;
};

// First-order phase transform for a time-varying window width:
//   omega = Re[d_b W / (i 2 pi W)] + (sigma'/sigma) Re[W_g2 / (i 2 pi W)]
// where d_b W is the full time derivative assembled from the Db plane and the
// window-width variation, and sigma'(b) comes from central differences of the
// track. gamma_rel is relative to the plane maximum magnitude.
PhasePlane phase_adaptive(const TimeScalePlane& w, const TimeScalePlane& w_db,
                          const TimeScalePlane& w_g2, std::span<const double> sigma_of_b,
                          double gamma_rel = 1e-5);

// Constant-sigma first-order transform (the sigma' terms vanish).
PhasePlane phase_conventional(const TimeScalePlane& w, const TimeScalePlane& w_db,
                              double gamma_rel = 1e-5);

// Second-order phase transform, exact on linear chirps. Where the scale
// derivative of a W_g1 / W exceeds the threshold the chirp-rate correction
//   - a Re[(W_g1 / (i 2 pi W)) R0],  R0 = d_a(d_b W / W + (sigma'/sigma) W_g2 / W)
//                                          / d_a(a W_g1 / W)
// is applied; elsewhere the transform falls back to the first-order value.
// eps_denom_rel scales the median of |a W_g1 / W| over valid cells.
PhasePlane phase_adaptive_2nd(const TimeScalePlane& w, const TimeScalePlane& w_db,
                              const TimeScalePlane& w_g1, const TimeScalePlane& w_g2,
                              std::span<const double> sigma_of_b, double gamma_rel = 1e-5,
                              double eps_denom_rel = 1e-8);

// Second-order transform for a constant window width. The t psi(t) plane of
// the classical formulation equals sigma times the G1 plane, and the ratio
// structure cancels the factor, so the G1 plane is passed directly.
PhasePlane phase_conventional_2nd(const TimeScalePlane& w, const TimeScalePlane& w_db,
                                  const TimeScalePlane& w_g1, double gamma_rel = 1e-5,
                                  double eps_denom_rel = 1e-8);

// Complex matrix indexed by (frequency bin, time). Bin k covers
// [k freq_step, (k+1) freq_step); the grid spans [0, sample_rate / 2).
struct TimeFreqPlane {
    Eigen::MatrixXcd data;  // n_bins x n_times
    double freq_step = 0.0;
    double sample_rate = 1.0;
    double t0 = 0.0;
    std::vector<double> sigma_track;

    Eigen::Index n_bins() const { return data.rows(); }
    Eigen::Index n_times() const { return data.cols(); }
    double bin_freq(Eigen::Index k) const { return static_cast<double>(k) * freq_step; }
};

// Reassigns each valid cell's coefficient, weighted by da/a (the last scale
// reuses the previous step), into the bin containing omega(cell). Cells with
// omega outside [0, sample_rate / 2) are dropped. Per-column sums over the
// squeezed cells are conserved exactly.
TimeFreqPlane squeeze(const TimeScalePlane& w, const PhasePlane& phase, Eigen::Index freq_bins);

// Integration weights da_j / a_j used by squeeze and the recovery sums.
std::vector<double> scale_weights(const ScaleGrid& grid);

}  // namespace tvsst
