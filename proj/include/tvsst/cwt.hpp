#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "tvsst/signal.hpp"
#include "tvsst/wavelet.hpp"

namespace tvsst {

// Dyadic scale grid a_j = 2^{j / n_voices} * dt for j = 1 .. n_voices * floor(log2 N).
struct ScaleGrid {
    std::vector<double> scales;
    int n_voices = 32;
    double dt = 1.0;

    Eigen::Index size() const { return static_cast<Eigen::Index>(scales.size()); }
};

ScaleGrid make_scale_grid(std::size_t n_samples, int n_voices, double dt);

// Analysis kernels backing the transform planes. G is the Gaussian window
// itself, G1 and G2 the t g(t) and t g'(t) kernels used by the second-order
// and adaptive phase transforms, Db the exact time derivative of the G plane.
enum class Kernel { G, G1, G2, Db };

// Complex coefficient plane indexed by (scale, time) together with the scale
// grid, the kernel that produced it, and the per-column window widths used.
struct TimeScalePlane {
    Eigen::MatrixXcd data;  // n_scales x n_times
    ScaleGrid grid;
    Kernel kernel = Kernel::G;
    std::vector<double> sigma_track;
    double sample_rate = 1.0;
    double t0 = 0.0;

    Eigen::Index n_scales() const { return data.rows(); }
    Eigen::Index n_times() const { return data.cols(); }
};

// DFT of the signal zero-padded to the next power of two >= 2N.
Eigen::VectorXcd padded_spectrum(const Signal& x, std::size_t padded_len);

// Constant-sigma plane evaluated in the frequency domain: only the
// non-negative DFT bins contribute (the wavelet is treated as analytic),
// and the first n_keep columns of the circular result are returned.
Eigen::MatrixXcd constant_cwt_matrix(const Eigen::VectorXcd& spectrum, Eigen::Index n_keep,
                                     double sample_rate, const ScaleGrid& grid, double sigma,
                                     const WaveletParams& params, Kernel kernel);

// Transform with a per-column window width sigma(b). One full constant-sigma
// plane is computed per distinct track value and the output assembled
// column-wise. When sigma_step > 0 the track is first snapped to multiples of
// sigma_step (clamped to stay >= alpha/mu), which bounds the number of
// constant-sigma passes; sigma_step == 0 uses the exact track values.
TimeScalePlane adaptive_cwt(const Signal& x, std::span<const double> sigma_of_b,
                            const WaveletParams& params, const ScaleGrid& grid, Kernel kernel,
                            double sigma_step = 0.0);

// Constant-sigma convenience wrapper.
TimeScalePlane constant_cwt(const Signal& x, double sigma, const WaveletParams& params,
                            const ScaleGrid& grid, Kernel kernel);

// Closed-form transform of a constant-amplitude linear chirp:
//   W(a, b) = A / sqrt(1 - i 2 pi sigma^2 a^2 r) * exp(i 2 pi (c b + r b^2 / 2)) * h(c + r b)
// with a Gaussian chirp factor h; principal branch of the square root.
std::complex<double> chirp_cwt_closed_form(const LfmComponent& comp, double a, double b,
                                           double sigma, const WaveletParams& params);

// Derivative along the scale axis: three-point central differences on the
// non-uniform grid, one-sided at the ends. Exact for quadratics in a.
Eigen::MatrixXcd d_scale(const Eigen::MatrixXcd& values, const std::vector<double>& scales);
TimeScalePlane d_scale(const TimeScalePlane& plane);

// True when the supported band [mu - alpha/sigma, mu + alpha/sigma] / a of
// the window at this scale lies below the Nyquist frequency; scales that
// fail it cannot represent in-band content at the given sampling rate.
bool scale_in_band(double a, double sigma, const WaveletParams& params, double sample_rate);

// True when cell (scale j, column n) lies at least depth_factor window
// durations away from both signal ends, i.e. outside the boundary-affected
// band left by the zero padding.
bool interior_cell(const TimeScalePlane& plane, const WaveletParams& params, Eigen::Index j,
                   Eigen::Index n, double depth_factor = 1.0);

}  // namespace tvsst
