#pragma once

#include <Eigen/Dense>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "tvsst/cwt.hpp"
#include "tvsst/estimation.hpp"
#include "tvsst/sst.hpp"

namespace tvsst {

using Metadata = std::vector<std::pair<std::string, std::string>>;

std::string format_number(double v);
// Complex cell format "re+imi" / "re-imi", e.g. "1.25e-03+4.5e-06i".
std::string format_complex(const std::complex<double>& v);

// Plane CSV: '#'-prefixed metadata lines, then a header row of times with the
// axis label in the corner, then one row per scale (or frequency bin) whose
// first column is the axis value.
void write_plane_csv(std::ostream& out, const TimeScalePlane& plane, const Metadata& meta);
void write_plane_csv(std::ostream& out, const TimeFreqPlane& plane, const Metadata& meta);

// Track CSV: t, sigma_u, C, sigma_est, plus optional named extra columns.
void write_sigma_track_csv(std::ostream& out, const std::vector<double>& times,
                           const SigmaTrack& track,
                           const std::vector<std::pair<std::string, std::vector<double>>>& extra,
                           const Metadata& meta);

// Component CSV: t, real, imag, ridge_Hz.
void write_component_csv(std::ostream& out, const Signal& component,
                         const std::vector<double>& ridge_freq, const Metadata& meta);

// Separability CSV: b, sigma1, sigma2 (empty cell when unseparable), margins.
void write_separability_csv(std::ostream& out, const std::vector<double>& times,
                            const std::vector<double>& sigma1_track,
                            const std::vector<std::optional<double>>& sigma2_track,
                            const std::vector<std::vector<double>>& margins, const Metadata& meta);

// 8-bit grayscale heatmap; matrix row 0 is rendered at the bottom. Values are
// normalized to the matrix maximum.
void write_heatmap_png(const std::string& path, const Eigen::MatrixXd& values);

}  // namespace tvsst
