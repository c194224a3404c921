#include "tvsst/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace tvsst {

namespace {

class CpsiCache {
public:
    explicit CpsiCache(const WaveletParams& params) : params_(params) {}

    double at(double sigma) {
        auto it = cache_.find(sigma);
        if (it != cache_.end()) return it->second;
        const double value = c_psi(sigma, params_);
        cache_.emplace(sigma, value);
        return value;
    }

private:
    const WaveletParams& params_;
    std::map<double, double> cache_;
};

Signal finish_recovery(std::vector<std::complex<double>> sums, CpsiCache& cpsi,
                       const std::vector<double>& sigma_track, double sample_rate, double t0,
                       RecoveryMode mode) {
    std::vector<std::complex<double>> samples(sums.size());
    for (std::size_t n = 0; n < sums.size(); ++n) {
        const double c = cpsi.at(sigma_track[n]);
        if (mode == RecoveryMode::Real) {
            samples[n] = std::complex<double>(2.0 * (sums[n] / c).real(), 0.0);
        } else {
            samples[n] = sums[n] / c;
        }
    }
    Signal out = make_signal(std::move(samples), sample_rate, t0);
    out.is_real = (mode == RecoveryMode::Real);
    return out;
}

}  // namespace

Signal recover_signal(const TimeScalePlane& plane, const WaveletParams& params,
                      RecoveryMode mode) {
    if (plane.sigma_track.size() != static_cast<std::size_t>(plane.n_times())) {
        throw std::invalid_argument("recover_signal: plane is missing its sigma track");
    }
    const std::vector<double> weights = scale_weights(plane.grid);
    std::vector<std::complex<double>> sums(static_cast<std::size_t>(plane.n_times()), 0.0);
    for (Eigen::Index n = 0; n < plane.n_times(); ++n) {
        std::complex<double> acc = 0.0;
        for (Eigen::Index j = 0; j < plane.n_scales(); ++j) {
            acc += plane.data(j, n) * weights[static_cast<std::size_t>(j)];
        }
        sums[static_cast<std::size_t>(n)] = acc;
    }
    CpsiCache cpsi(params);
    return finish_recovery(std::move(sums), cpsi, plane.sigma_track, plane.sample_rate, plane.t0,
                           mode);
}

Signal recover_signal(const TimeFreqPlane& plane, const WaveletParams& params, RecoveryMode mode) {
    if (plane.sigma_track.size() != static_cast<std::size_t>(plane.n_times())) {
        throw std::invalid_argument("recover_signal: plane is missing its sigma track");
    }
    std::vector<std::complex<double>> sums(static_cast<std::size_t>(plane.n_times()), 0.0);
    for (Eigen::Index n = 0; n < plane.n_times(); ++n) {
        sums[static_cast<std::size_t>(n)] = plane.data.col(n).sum();
    }
    CpsiCache cpsi(params);
    return finish_recovery(std::move(sums), cpsi, plane.sigma_track, plane.sample_rate, plane.t0,
                           mode);
}

RidgeSet extract_ridges(const TimeFreqPlane& tf, std::size_t n_components, Eigen::Index band,
                        Eigen::Index max_jump) {
    if (n_components < 1) throw std::invalid_argument("extract_ridges: need n_components >= 1");
    const Eigen::Index n_bins = tf.n_bins();
    const Eigen::Index n_times = tf.n_times();
    Eigen::MatrixXd mag = tf.data.cwiseAbs();
    Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> open(n_bins, n_times);
    open.setConstant(true);

    RidgeSet set;
    set.band = band;
    for (std::size_t comp = 0; comp < n_components; ++comp) {
        // seed at the largest remaining cell
        Eigen::Index seed_bin = -1, seed_t = -1;
        double best = 0.0;
        for (Eigen::Index n = 0; n < n_times; ++n) {
            for (Eigen::Index k = 0; k < n_bins; ++k) {
                if (open(k, n) && mag(k, n) > best) {
                    best = mag(k, n);
                    seed_bin = k;
                    seed_t = n;
                }
            }
        }
        if (seed_bin < 0) {
            set.complete = false;
            break;
        }

        std::vector<Eigen::Index> ridge(static_cast<std::size_t>(n_times), seed_bin);
        auto link = [&](Eigen::Index from, Eigen::Index to, Eigen::Index step) {
            Eigen::Index prev = seed_bin;
            for (Eigen::Index n = from; n != to + step; n += step) {
                const Eigen::Index lo = std::max<Eigen::Index>(0, prev - max_jump);
                const Eigen::Index hi = std::min<Eigen::Index>(n_bins - 1, prev + max_jump);
                Eigen::Index pick = -1;
                double pick_mag = -1.0;
                for (Eigen::Index k = lo; k <= hi; ++k) {
                    if (open(k, n) && mag(k, n) > pick_mag) {
                        pick_mag = mag(k, n);
                        pick = k;
                    }
                }
                if (pick < 0) pick = prev;  // window fully retired: hold course
                ridge[static_cast<std::size_t>(n)] = pick;
                prev = pick;
            }
        };
        if (seed_t + 1 < n_times) link(seed_t + 1, n_times - 1, 1);
        if (seed_t - 1 >= 0) link(seed_t - 1, 0, -1);

        for (Eigen::Index n = 0; n < n_times; ++n) {
            const Eigen::Index r = ridge[static_cast<std::size_t>(n)];
            const Eigen::Index lo = std::max<Eigen::Index>(0, r - 2 * band);
            const Eigen::Index hi = std::min<Eigen::Index>(n_bins - 1, r + 2 * band);
            for (Eigen::Index k = lo; k <= hi; ++k) open(k, n) = false;
        }
        set.bins.push_back(std::move(ridge));
    }
    return set;
}

Component recover_component(const TimeFreqPlane& tf, const std::vector<Eigen::Index>& ridge,
                            Eigen::Index band, const WaveletParams& params, RecoveryMode mode) {
    if (ridge.size() != static_cast<std::size_t>(tf.n_times())) {
        throw std::invalid_argument("recover_component: ridge must cover every time sample");
    }
    if (band < 0) throw std::invalid_argument("recover_component: band must be >= 0");
    std::vector<std::complex<double>> sums(ridge.size(), 0.0);
    Component comp;
    comp.ridge_freq.resize(ridge.size());
    for (Eigen::Index n = 0; n < tf.n_times(); ++n) {
        const Eigen::Index r = ridge[static_cast<std::size_t>(n)];
        const Eigen::Index lo = std::max<Eigen::Index>(0, r - band);
        const Eigen::Index hi = std::min<Eigen::Index>(tf.n_bins() - 1, r + band);
        std::complex<double> acc = 0.0;
        for (Eigen::Index k = lo; k <= hi; ++k) acc += tf.data(k, n);
        sums[static_cast<std::size_t>(n)] = acc;
        comp.ridge_freq[static_cast<std::size_t>(n)] = tf.bin_freq(r);
    }
    CpsiCache cpsi(params);
    comp.signal = finish_recovery(std::move(sums), cpsi, tf.sigma_track, tf.sample_rate, tf.t0,
                                  mode);
    return comp;
}

double relative_rmse(const Signal& ref, const Signal& test, double t_lo, double t_hi) {
    if (ref.size() != test.size() || ref.sample_rate != test.sample_rate) {
        throw std::invalid_argument("relative_rmse: signals must share length and sample rate");
    }
    double num = 0.0;
    double den = 0.0;
    for (std::size_t n = 0; n < ref.size(); ++n) {
        const double t = ref.time_at(n);
        if (t < t_lo || t > t_hi) continue;
        num += std::norm(ref.samples[n] - test.samples[n]);
        den += std::norm(ref.samples[n]);
    }
    if (den == 0.0) throw std::invalid_argument("relative_rmse: reference is zero on the range");
    return std::sqrt(num / den);
}

}  // namespace tvsst
