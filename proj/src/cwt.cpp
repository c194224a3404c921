#include "tvsst/cwt.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "tvsst/fft.hpp"

namespace tvsst {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_sigma(double sigma, const WaveletParams& params, const char* who) {
    if (sigma < params.sigma_min() - 1e-12) {
        throw std::invalid_argument(std::string(who) + ": sigma below alpha/mu");
    }
}

// Snap a track value onto multiples of step without dropping below alpha/mu.
double snap_sigma(double sigma, double step, double sigma_min) {
    double lowest = std::ceil(sigma_min / step - 1e-9) * step;
    return std::max(std::round(sigma / step) * step, lowest);
}

}  // namespace

ScaleGrid make_scale_grid(std::size_t n_samples, int n_voices, double dt) {
    if (n_samples < 2) throw std::invalid_argument("make_scale_grid: need at least 2 samples");
    if (n_voices < 1) throw std::invalid_argument("make_scale_grid: n_voices must be >= 1");
    ScaleGrid grid;
    grid.n_voices = n_voices;
    grid.dt = dt;
    auto octaves = static_cast<int>(std::floor(std::log2(static_cast<double>(n_samples)) + 1e-12));
    int count = n_voices * octaves;
    grid.scales.reserve(count);
    for (int j = 1; j <= count; ++j) {
        grid.scales.push_back(std::exp2(static_cast<double>(j) / n_voices) * dt);
    }
    return grid;
}

Eigen::VectorXcd padded_spectrum(const Signal& x, std::size_t padded_len) {
    Eigen::VectorXcd buf = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(padded_len));
    for (std::size_t k = 0; k < x.size(); ++k) buf(static_cast<Eigen::Index>(k)) = x.samples[k];
    return fft(buf);
}

Eigen::MatrixXcd constant_cwt_matrix(const Eigen::VectorXcd& spectrum, Eigen::Index n_keep,
                                     double sample_rate, const ScaleGrid& grid, double sigma,
                                     const WaveletParams& params, Kernel kernel) {
    const Eigen::Index m = spectrum.size();
    const double dxi = sample_rate / static_cast<double>(m);
    const double nyquist = sample_rate / 2.0;
    // The wavelet is sampled on the unwrapped positive axis [0, fs). A hard
    // cut at the Nyquist bin would ring with 1/t tails in time and smear the
    // signal edges across the whole plane at small scales, so bins above fs/2
    // are rolled off smoothly instead; mirror content of real signals sits
    // beyond the roll-off for in-band analyses.
    const double roll_end = 1.2 * nyquist;
    auto taper = [&](double xi) {
        if (xi <= nyquist) return 1.0;
        if (xi >= roll_end) return 0.0;
        const double u = (xi - nyquist) / (roll_end - nyquist);
        return 0.5 * (1.0 + std::cos(kPi * u));
    };

    Eigen::MatrixXcd out(grid.size(), n_keep);
    Eigen::VectorXcd buf(m);
    for (Eigen::Index j = 0; j < grid.size(); ++j) {
        const double a = grid.scales[static_cast<std::size_t>(j)];
        for (Eigen::Index k = 0; k < m; ++k) {
            const double xi = static_cast<double>(k) * dxi;
            const double window = taper(xi);
            if (window == 0.0) {
                buf(k) = 0.0;
                continue;
            }
            const double eta = sigma * (a * xi - params.mu);
            const double gg = window * std::exp(-2.0 * kPi * kPi * eta * eta);
            std::complex<double> h;
            switch (kernel) {
                case Kernel::G:
                    h = gg;
                    break;
                case Kernel::G1:
                    // conj of g1_hat(eta)
                    h = std::complex<double>(0.0, kTwoPi * eta * gg);
                    break;
                case Kernel::G2:
                    h = (4.0 * kPi * kPi * eta * eta - 1.0) * gg;
                    break;
                case Kernel::Db:
                    h = std::complex<double>(0.0, kTwoPi * xi) * gg;
                    break;
            }
            buf(k) = spectrum(k) * h;
        }
        Eigen::VectorXcd row = ifft(buf);
        out.row(j) = row.head(n_keep).transpose();
    }
    return out;
}

TimeScalePlane adaptive_cwt(const Signal& x, std::span<const double> sigma_of_b,
                            const WaveletParams& params, const ScaleGrid& grid, Kernel kernel,
                            double sigma_step) {
    const auto n = x.size();
    if (sigma_of_b.size() != n) {
        throw std::invalid_argument("adaptive_cwt: sigma track length must match the signal");
    }
    for (double s : sigma_of_b) check_sigma(s, params, "adaptive_cwt");

    std::vector<double> used(sigma_of_b.begin(), sigma_of_b.end());
    if (sigma_step > 0.0) {
        for (double& s : used) s = snap_sigma(s, sigma_step, params.sigma_min());
    }

    std::map<double, std::vector<Eigen::Index>> groups;
    for (std::size_t k = 0; k < used.size(); ++k) {
        groups[used[k]].push_back(static_cast<Eigen::Index>(k));
    }

    const std::size_t padded = next_pow2(2 * n);
    const Eigen::VectorXcd spectrum = padded_spectrum(x, padded);

    TimeScalePlane plane;
    plane.grid = grid;
    plane.kernel = kernel;
    plane.sigma_track = std::move(used);
    plane.sample_rate = x.sample_rate;
    plane.t0 = x.t0;
    plane.data.resize(grid.size(), static_cast<Eigen::Index>(n));
    for (const auto& [sigma, cols] : groups) {
        Eigen::MatrixXcd full = constant_cwt_matrix(spectrum, static_cast<Eigen::Index>(n),
                                                    x.sample_rate, grid, sigma, params, kernel);
        for (Eigen::Index col : cols) plane.data.col(col) = full.col(col);
    }
    return plane;
}

TimeScalePlane constant_cwt(const Signal& x, double sigma, const WaveletParams& params,
                            const ScaleGrid& grid, Kernel kernel) {
    std::vector<double> track(x.size(), sigma);
    return adaptive_cwt(x, track, params, grid, kernel, 0.0);
}

std::complex<double> chirp_cwt_closed_form(const LfmComponent& comp, double a, double b,
                                           double sigma, const WaveletParams& params) {
    if (comp.p != 0.0 || comp.q != 0.0) {
        throw std::invalid_argument("chirp_cwt_closed_form: requires constant amplitude (p=q=0)");
    }
    if (!(a > 0.0)) throw std::invalid_argument("chirp_cwt_closed_form: scale must be positive");
    check_sigma(sigma, params, "chirp_cwt_closed_form");

    const double r = comp.r;
    const double sa2 = sigma * sigma * a * a;
    // 1 - i 2 pi sigma^2 a^2 r has real part 1, so the principal branch of the
    // square root is continuous in r.
    const std::complex<double> root = std::sqrt(std::complex<double>(1.0, -kTwoPi * sa2 * r));
    const double xi = comp.c + r * b;
    const double denom = 1.0 + kTwoPi * sa2 * r * kTwoPi * sa2 * r;
    const double d = xi - params.mu / a;
    const std::complex<double> h =
        std::exp(std::complex<double>(-2.0 * kPi * kPi * a * a * sigma * sigma / denom) * d * d *
                 std::complex<double>(1.0, kTwoPi * sa2 * r));
    const std::complex<double> osc = std::polar(1.0, kTwoPi * (comp.c * b + 0.5 * r * b * b));
    return comp.amplitude / root * osc * h;
}

Eigen::MatrixXcd d_scale(const Eigen::MatrixXcd& values, const std::vector<double>& scales) {
    const Eigen::Index rows = values.rows();
    if (rows < 3) throw std::invalid_argument("d_scale: need at least 3 scales");
    if (static_cast<std::size_t>(rows) != scales.size()) {
        throw std::invalid_argument("d_scale: scale count mismatch");
    }
    Eigen::MatrixXcd out(rows, values.cols());
    for (Eigen::Index j = 1; j + 1 < rows; ++j) {
        const double hm = scales[j] - scales[j - 1];
        const double hp = scales[j + 1] - scales[j];
        out.row(j) = ((values.row(j + 1) - values.row(j)) * (hm / hp) +
                      (values.row(j) - values.row(j - 1)) * (hp / hm)) /
                     (hm + hp);
    }
    out.row(0) = (values.row(1) - values.row(0)) / (scales[1] - scales[0]);
    out.row(rows - 1) =
        (values.row(rows - 1) - values.row(rows - 2)) / (scales[rows - 1] - scales[rows - 2]);
    return out;
}

TimeScalePlane d_scale(const TimeScalePlane& plane) {
    TimeScalePlane out = plane;
    out.data = d_scale(plane.data, plane.grid.scales);
    return out;
}

bool scale_in_band(double a, double sigma, const WaveletParams& params, double sample_rate) {
    return (params.mu + params.alpha / sigma) / a <= sample_rate / 2.0;
}

bool interior_cell(const TimeScalePlane& plane, const WaveletParams& params, Eigen::Index j,
                   Eigen::Index n, double depth_factor) {
    const double dt = 1.0 / plane.sample_rate;
    const double a = plane.grid.scales[static_cast<std::size_t>(j)];
    const double sigma = plane.sigma_track[static_cast<std::size_t>(n)];
    const double depth = depth_factor * window_duration(a, sigma, params);
    const double from_start = static_cast<double>(n) * dt;
    const double from_end = static_cast<double>(plane.n_times() - 1 - n) * dt;
    return from_start >= depth && from_end >= depth;
}

}  // namespace tvsst
