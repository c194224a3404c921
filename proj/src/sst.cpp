#include "tvsst/sst.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tvsst {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_aligned(const TimeScalePlane& a, const TimeScalePlane& b, const char* who) {
    if (a.data.rows() != b.data.rows() || a.data.cols() != b.data.cols() ||
        a.grid.scales != b.grid.scales || a.sigma_track != b.sigma_track) {
        throw std::invalid_argument(std::string(who) + ": planes do not share grid and sigma track");
    }
}

// Re[z / (i 2 pi w)] = Im[z conj(w)] / (2 pi |w|^2)
double re_over_i2pi(const std::complex<double>& z, const std::complex<double>& w) {
    double n = std::norm(w);
    return std::imag(z * std::conj(w)) / (kTwoPi * n);
}

std::vector<double> track_derivative(std::span<const double> track, double dt) {
    const std::size_t n = track.size();
    std::vector<double> d(n, 0.0);
    if (n < 2) return d;
    d[0] = (track[1] - track[0]) / dt;
    for (std::size_t k = 1; k + 1 < n; ++k) d[k] = (track[k + 1] - track[k - 1]) / (2.0 * dt);
    d[n - 1] = (track[n - 1] - track[n - 2]) / dt;
    return d;
}

struct SecondOrderInput {
    const TimeScalePlane& w;
    const TimeScalePlane& w_db;
    const TimeScalePlane& w_g1;
    const TimeScalePlane* w_g2;          // null when sigma is constant
    std::span<const double> sigma_of_b;  // empty when sigma is constant
};

PhasePlane phase_second_order(const SecondOrderInput& in, double gamma_rel, double eps_denom_rel) {
    check_aligned(in.w, in.w_db, "phase 2nd order");
    check_aligned(in.w, in.w_g1, "phase 2nd order");
    if (in.w_g2 != nullptr) check_aligned(in.w, *in.w_g2, "phase 2nd order");
    if (!(gamma_rel > 0.0)) throw std::invalid_argument("phase 2nd order: gamma must be positive");

    const Eigen::Index rows = in.w.n_scales();
    const Eigen::Index cols = in.w.n_times();
    const double dt = 1.0 / in.w.sample_rate;
    const double max_mag = in.w.data.cwiseAbs().maxCoeff();
    const double gamma = gamma_rel * max_mag;

    std::vector<double> dsigma(cols, 0.0);
    if (!in.sigma_of_b.empty()) dsigma = track_derivative(in.sigma_of_b, dt);

    // Ratio planes feeding the scale derivatives. Cells below gamma carry
    // no squeezed mass, so their ratios are zeroed to keep the derivative
    // stencil finite near the ridge edges.
    Eigen::MatrixXcd r_db(rows, cols), r_g1(rows, cols);
    Eigen::MatrixXcd r_g2;
    if (in.w_g2 != nullptr) r_g2.resize(rows, cols);
    for (Eigen::Index n = 0; n < cols; ++n) {
        const double k1 = in.sigma_of_b.empty()
                              ? 0.0
                              : dsigma[static_cast<std::size_t>(n)] /
                                    in.sigma_of_b[static_cast<std::size_t>(n)];
        for (Eigen::Index j = 0; j < rows; ++j) {
            const std::complex<double> wv = in.w.data(j, n);
            if (std::abs(wv) <= gamma) {
                r_db(j, n) = 0.0;
                r_g1(j, n) = 0.0;
                if (in.w_g2 != nullptr) r_g2(j, n) = 0.0;
                continue;
            }
            const std::complex<double> g2v = (in.w_g2 != nullptr) ? in.w_g2->data(j, n) : 0.0;
            const std::complex<double> full_db = in.w_db.data(j, n) - k1 * (wv + g2v);
            const double a = in.w.grid.scales[static_cast<std::size_t>(j)];
            r_db(j, n) = full_db / wv;
            r_g1(j, n) = a * in.w_g1.data(j, n) / wv;
            if (in.w_g2 != nullptr) r_g2(j, n) = g2v / wv;
        }
    }

    Eigen::MatrixXcd da_db = d_scale(r_db, in.w.grid.scales);
    Eigen::MatrixXcd da_g1 = d_scale(r_g1, in.w.grid.scales);
    Eigen::MatrixXcd da_g2;
    if (in.w_g2 != nullptr) da_g2 = d_scale(r_g2, in.w.grid.scales);

    // Median of |a W_g1 / W| over valid cells sets the branch threshold scale.
    std::vector<double> mags;
    mags.reserve(static_cast<std::size_t>(rows * cols));
    for (Eigen::Index n = 0; n < cols; ++n) {
        for (Eigen::Index j = 0; j < rows; ++j) {
            if (std::abs(in.w.data(j, n)) > gamma) mags.push_back(std::abs(r_g1(j, n)));
        }
    }
    double eps_denom = 0.0;
    if (!mags.empty()) {
        auto mid = mags.begin() + static_cast<std::ptrdiff_t>(mags.size() / 2);
        std::nth_element(mags.begin(), mid, mags.end());
        eps_denom = eps_denom_rel * *mid;
    }

    PhasePlane phase;
    phase.omega = Eigen::MatrixXd::Zero(rows, cols);
    phase.valid.setConstant(rows, cols, false);
    phase.gamma = gamma;
    for (Eigen::Index n = 0; n < cols; ++n) {
        const double k1 = in.sigma_of_b.empty()
                              ? 0.0
                              : dsigma[static_cast<std::size_t>(n)] /
                                    in.sigma_of_b[static_cast<std::size_t>(n)];
        for (Eigen::Index j = 0; j < rows; ++j) {
            const std::complex<double> wv = in.w.data(j, n);
            if (std::abs(wv) <= gamma) continue;
            const std::complex<double> g2v = (in.w_g2 != nullptr) ? in.w_g2->data(j, n) : 0.0;
            const std::complex<double> full_db = in.w_db.data(j, n) - k1 * (wv + g2v);
            double omega = re_over_i2pi(full_db, wv) + k1 * re_over_i2pi(g2v, wv);

            const std::complex<double> denom = da_g1(j, n);
            if (std::abs(denom) > eps_denom) {
                std::complex<double> num = da_db(j, n);
                if (in.w_g2 != nullptr) num += k1 * da_g2(j, n);
                const std::complex<double> r0 = num / denom;
                const double a = in.w.grid.scales[static_cast<std::size_t>(j)];
                omega -= a * re_over_i2pi(in.w_g1.data(j, n) * r0, wv);
            }
            phase.omega(j, n) = omega;
            phase.valid(j, n) = true;
        }
    }
    return phase;
}

}  // namespace

PhasePlane phase_adaptive(const TimeScalePlane& w, const TimeScalePlane& w_db,
                          const TimeScalePlane& w_g2, std::span<const double> sigma_of_b,
                          double gamma_rel) {
    check_aligned(w, w_db, "phase_adaptive");
    check_aligned(w, w_g2, "phase_adaptive");
    if (!(gamma_rel > 0.0)) throw std::invalid_argument("phase_adaptive: gamma must be positive");
    if (sigma_of_b.size() != static_cast<std::size_t>(w.n_times())) {
        throw std::invalid_argument("phase_adaptive: sigma track length mismatch");
    }

    const double gamma = gamma_rel * w.data.cwiseAbs().maxCoeff();
    const std::vector<double> dsigma = track_derivative(sigma_of_b, 1.0 / w.sample_rate);

    PhasePlane phase;
    phase.omega = Eigen::MatrixXd::Zero(w.n_scales(), w.n_times());
    phase.valid.setConstant(w.n_scales(), w.n_times(), false);
    phase.gamma = gamma;
    for (Eigen::Index n = 0; n < w.n_times(); ++n) {
        const double k1 =
            dsigma[static_cast<std::size_t>(n)] / sigma_of_b[static_cast<std::size_t>(n)];
        for (Eigen::Index j = 0; j < w.n_scales(); ++j) {
            const std::complex<double> wv = w.data(j, n);
            if (std::abs(wv) <= gamma) continue;
            const std::complex<double> g2v = w_g2.data(j, n);
            const std::complex<double> full_db = w_db.data(j, n) - k1 * (wv + g2v);
            phase.omega(j, n) = re_over_i2pi(full_db, wv) + k1 * re_over_i2pi(g2v, wv);
            phase.valid(j, n) = true;
        }
    }
    return phase;
}

PhasePlane phase_conventional(const TimeScalePlane& w, const TimeScalePlane& w_db,
                              double gamma_rel) {
    check_aligned(w, w_db, "phase_conventional");
    if (!(gamma_rel > 0.0)) {
        throw std::invalid_argument("phase_conventional: gamma must be positive");
    }
    const double gamma = gamma_rel * w.data.cwiseAbs().maxCoeff();
    PhasePlane phase;
    phase.omega = Eigen::MatrixXd::Zero(w.n_scales(), w.n_times());
    phase.valid.setConstant(w.n_scales(), w.n_times(), false);
    phase.gamma = gamma;
    for (Eigen::Index n = 0; n < w.n_times(); ++n) {
        for (Eigen::Index j = 0; j < w.n_scales(); ++j) {
            const std::complex<double> wv = w.data(j, n);
            if (std::abs(wv) <= gamma) continue;
            phase.omega(j, n) = re_over_i2pi(w_db.data(j, n), wv);
            phase.valid(j, n) = true;
        }
    }
    return phase;
}

PhasePlane phase_adaptive_2nd(const TimeScalePlane& w, const TimeScalePlane& w_db,
                              const TimeScalePlane& w_g1, const TimeScalePlane& w_g2,
                              std::span<const double> sigma_of_b, double gamma_rel,
                              double eps_denom_rel) {
    if (sigma_of_b.size() != static_cast<std::size_t>(w.n_times())) {
        throw std::invalid_argument("phase_adaptive_2nd: sigma track length mismatch");
    }
    return phase_second_order({w, w_db, w_g1, &w_g2, sigma_of_b}, gamma_rel, eps_denom_rel);
}

PhasePlane phase_conventional_2nd(const TimeScalePlane& w, const TimeScalePlane& w_db,
                                  const TimeScalePlane& w_g1, double gamma_rel,
                                  double eps_denom_rel) {
    return phase_second_order({w, w_db, w_g1, nullptr, {}}, gamma_rel, eps_denom_rel);
}

std::vector<double> scale_weights(const ScaleGrid& grid) {
    const std::size_t n = grid.scales.size();
    if (n < 2) throw std::invalid_argument("scale_weights: need at least 2 scales");
    std::vector<double> w(n);
    for (std::size_t j = 0; j + 1 < n; ++j) {
        w[j] = (grid.scales[j + 1] - grid.scales[j]) / grid.scales[j];
    }
    w[n - 1] = (grid.scales[n - 1] - grid.scales[n - 2]) / grid.scales[n - 1];
    return w;
}

TimeFreqPlane squeeze(const TimeScalePlane& w, const PhasePlane& phase, Eigen::Index freq_bins) {
    if (freq_bins < 2) throw std::invalid_argument("squeeze: need at least 2 frequency bins");
    if (phase.omega.rows() != w.n_scales() || phase.omega.cols() != w.n_times()) {
        throw std::invalid_argument("squeeze: phase plane does not match the coefficient plane");
    }
    const double nyquist = w.sample_rate / 2.0;
    TimeFreqPlane tf;
    tf.freq_step = nyquist / static_cast<double>(freq_bins);
    tf.sample_rate = w.sample_rate;
    tf.t0 = w.t0;
    tf.sigma_track = w.sigma_track;
    tf.data = Eigen::MatrixXcd::Zero(freq_bins, w.n_times());

    const std::vector<double> weights = scale_weights(w.grid);
    for (Eigen::Index n = 0; n < w.n_times(); ++n) {
        for (Eigen::Index j = 0; j < w.n_scales(); ++j) {
            if (!phase.valid(j, n)) continue;
            const double omega = phase.omega(j, n);
            if (!(omega >= 0.0 && omega < nyquist)) continue;
            const auto bin = static_cast<Eigen::Index>(omega / tf.freq_step);
            tf.data(std::min(bin, freq_bins - 1), n) +=
                w.data(j, n) * weights[static_cast<std::size_t>(j)];
        }
    }
    return tf;
}

}  // namespace tvsst
