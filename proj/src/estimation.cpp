#include "tvsst/estimation.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "tvsst/fft.hpp"

namespace tvsst {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double entropy_from_sums(double s2l, double s2, double ell) {
    if (s2 <= 0.0) throw std::domain_error("renyi_entropy: window is all zero");
    return std::log2(s2l / std::pow(s2, ell)) / (1.0 - ell);
}

double windowed_entropy(const Eigen::MatrixXf& mag, Eigen::Index t, Eigen::Index zeta,
                        double ell) {
    const Eigen::Index lo = std::max<Eigen::Index>(0, t - zeta);
    const Eigen::Index hi = std::min<Eigen::Index>(mag.cols() - 1, t + zeta);
    double s2 = 0.0;
    double s2l = 0.0;
    for (Eigen::Index n = lo; n <= hi; ++n) {
        for (Eigen::Index j = 0; j < mag.rows(); ++j) {
            const double m = static_cast<double>(mag(j, n));
            const double m2 = m * m;
            s2 += m2;
            s2l += std::pow(m2, ell);
        }
    }
    return entropy_from_sums(s2l, s2, ell);
}

// Linear fit y = c + r (t - t_center) over (x, y) pairs; r = 0 when the
// abscissas are degenerate.
void fit_linear(const std::vector<double>& x, const std::vector<double>& y, double& c, double& r) {
    const auto n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double det = sxx - sx * sx / n;
    if (x.size() < 2 || det <= 0.0) {
        r = 0.0;
        c = sy / n;
        return;
    }
    r = (sxy - sx * sy / n) / det;
    c = sy / n - r * sx / n;
}

}  // namespace

SigmaGrid SigmaGrid::make(double sigma_hi, double sigma_lo, double step,
                          const WaveletParams& params) {
    if (!(step > 0.0)) throw std::invalid_argument("SigmaGrid: step must be positive");
    if (!(sigma_hi > sigma_lo)) throw std::invalid_argument("SigmaGrid: empty range");
    if (sigma_lo <= params.sigma_min()) {
        throw std::invalid_argument("SigmaGrid: lower end must exceed alpha/mu");
    }
    SigmaGrid grid;
    grid.step = step;
    for (double s = sigma_hi; s > sigma_lo - 0.5 * step; s -= step) {
        grid.values.push_back(std::max(s, sigma_lo));
    }
    return grid;
}

CwtMagnitudeStack compute_cwt_stack(const Signal& x, const SigmaGrid& sigmas,
                                    const ScaleGrid& scales, const WaveletParams& params) {
    const std::size_t padded = next_pow2(2 * x.size());
    const Eigen::VectorXcd spectrum = padded_spectrum(x, padded);

    CwtMagnitudeStack stack;
    stack.sigmas = sigmas;
    stack.scales = scales;
    stack.sample_rate = x.sample_rate;
    stack.t0 = x.t0;
    stack.mag.reserve(static_cast<std::size_t>(sigmas.size()));
    for (double sigma : sigmas.values) {
        Eigen::MatrixXcd plane =
            constant_cwt_matrix(spectrum, static_cast<Eigen::Index>(x.size()), x.sample_rate,
                                scales, sigma, params, Kernel::G);
        stack.mag.push_back(plane.cwiseAbs().cast<float>());
        stack.plane_max.push_back(static_cast<double>(stack.mag.back().maxCoeff()));
    }
    return stack;
}

double renyi_entropy(const Eigen::MatrixXf& mag, Eigen::Index t, Eigen::Index zeta, double ell) {
    if (t < 0 || t >= mag.cols()) throw std::invalid_argument("renyi_entropy: t out of range");
    return windowed_entropy(mag, t, zeta, ell);
}

double renyi_entropy(const TimeScalePlane& plane, Eigen::Index t, Eigen::Index zeta, double ell) {
    return windowed_entropy(plane.data.cwiseAbs().cast<float>(), t, zeta, ell);
}

double renyi_entropy(const TimeFreqPlane& plane, Eigen::Index t, Eigen::Index zeta, double ell) {
    return windowed_entropy(plane.data.cwiseAbs().cast<float>(), t, zeta, ell);
}

std::pair<double, Eigen::Index> sigma_u(const CwtMagnitudeStack& stack, Eigen::Index t,
                                        Eigen::Index zeta, double ell) {
    Eigen::Index best = stack.sigmas.size() - 1;
    double best_entropy = windowed_entropy(stack.mag[static_cast<std::size_t>(best)], t, zeta, ell);
    // scan upward in width; a larger width replaces only on a strictly
    // smaller entropy, so ties resolve to the smallest width
    for (Eigen::Index i = stack.sigmas.size() - 2; i >= 0; --i) {
        const double e = windowed_entropy(stack.mag[static_cast<std::size_t>(i)], t, zeta, ell);
        if (e < best_entropy) {
            best_entropy = e;
            best = i;
        }
    }
    return {stack.sigmas.values[static_cast<std::size_t>(best)], best};
}

bool SupportIntervals::nonoverlapping() const {
    for (std::size_t k = 1; k < items.size(); ++k) {
        if (items[k - 1].upper > items[k].lower) return false;
    }
    return true;
}

SupportIntervals support_intervals(const CwtMagnitudeStack& stack, Eigen::Index sigma_index,
                                   Eigen::Index t, double gamma3, const WaveletParams& params) {
    if (!(gamma3 > 0.0)) throw std::invalid_argument("support_intervals: gamma3 must be positive");
    const auto si = static_cast<std::size_t>(sigma_index);
    const Eigen::MatrixXf& mag = stack.mag[si];
    const double sigma = stack.sigmas.values[si];
    const double threshold = gamma3 * stack.plane_max[si];
    const Eigen::Index n_scales = mag.rows();
    const Eigen::Index n_times = mag.cols();
    const double dt = 1.0 / stack.sample_rate;

    SupportIntervals result;
    for (Eigen::Index j = 1; j + 1 < n_scales; ++j) {
        // plateaus keep their smallest scale index
        const float v = mag(j, t);
        if (!(v > threshold) || !(v > mag(j - 1, t)) || !(v >= mag(j + 1, t))) continue;

        const double a_peak = stack.scales.scales[static_cast<std::size_t>(j)];
        const double half_window = 2.0 * std::numbers::pi * params.alpha * sigma * a_peak;
        const auto half_samples = static_cast<Eigen::Index>(std::floor(half_window / dt));
        const Eigen::Index lo = std::max<Eigen::Index>(0, t - half_samples);
        const Eigen::Index hi = std::min<Eigen::Index>(n_times - 1, t + half_samples);

        // greedy ridge through the peak, +-2 scale bins per time step
        std::vector<double> xs, ys;
        xs.reserve(static_cast<std::size_t>(hi - lo + 1));
        ys.reserve(xs.capacity());
        auto follow = [&](Eigen::Index from, Eigen::Index to, Eigen::Index step) {
            Eigen::Index ridge = j;
            for (Eigen::Index n = from; n != to + step; n += step) {
                Eigen::Index best = std::max<Eigen::Index>(0, ridge - 2);
                const Eigen::Index top = std::min<Eigen::Index>(n_scales - 1, ridge + 2);
                for (Eigen::Index cand = best + 1; cand <= top; ++cand) {
                    if (mag(cand, n) > mag(best, n)) best = cand;
                }
                ridge = best;
                xs.push_back(static_cast<double>(n - t) * dt);
                ys.push_back(params.mu / stack.scales.scales[static_cast<std::size_t>(ridge)]);
            }
        };
        xs.push_back(0.0);
        ys.push_back(params.mu / a_peak);
        if (t + 1 <= hi) follow(t + 1, hi, 1);
        if (t - 1 >= lo) follow(t - 1, lo, -1);

        double c_hat = 0.0;
        double r_hat = 0.0;
        fit_linear(xs, ys, c_hat, r_hat);
        if (!(c_hat > 0.0)) {
            result.zone_defined = false;
            continue;
        }

        SupportInterval item;
        item.peak_scale = a_peak;
        item.c_hat = c_hat;
        item.r_hat = r_hat;
        const double A = params.alpha;
        const double mu = params.mu;
        if (r_hat == 0.0) {
            item.upper = (mu + A / sigma) / c_hat;
            item.lower = (mu - A / sigma) / c_hat;
        } else {
            const double rad_upper =
                c_hat * c_hat - 8.0 * std::numbers::pi * A * (A + mu * sigma) * std::abs(r_hat);
            if (rad_upper < 0.0) {
                result.zone_defined = false;
                continue;
            }
            const double rad_lower =
                c_hat * c_hat + 8.0 * std::numbers::pi * A * (mu * sigma - A) * std::abs(r_hat);
            item.upper = 2.0 * (mu + A / sigma) / (c_hat + std::sqrt(rad_upper));
            item.lower = 2.0 * (mu - A / sigma) / (c_hat + std::sqrt(rad_lower));
        }
        result.items.push_back(item);
    }
    return result;
}

SigmaTrack estimate_sigma(const CwtMagnitudeStack& stack, Eigen::Index zeta, double ell,
                          double gamma3, std::span<const double> smoothing_weights,
                          const WaveletParams& params) {
    if (smoothing_weights.empty()) {
        throw std::invalid_argument("estimate_sigma: smoothing weights must be non-empty");
    }
    double weight_sum = 0.0;
    for (double w : smoothing_weights) {
        if (w < 0.0) throw std::invalid_argument("estimate_sigma: negative smoothing weight");
        weight_sum += w;
    }
    if (std::abs(weight_sum - 1.0) > 1e-9) {
        throw std::invalid_argument("estimate_sigma: smoothing weights must sum to 1");
    }

    const Eigen::Index n_times = stack.n_times();
    SigmaTrack track;
    track.weights.assign(smoothing_weights.begin(), smoothing_weights.end());
    track.sigma_u.resize(static_cast<std::size_t>(n_times));
    track.raw.resize(static_cast<std::size_t>(n_times));

    for (Eigen::Index t = 0; t < n_times; ++t) {
        const auto [su, iu] = sigma_u(stack, t, zeta, ell);
        track.sigma_u[static_cast<std::size_t>(t)] = su;

        Eigen::Index accepted = iu;
        const SupportIntervals at_su = support_intervals(stack, iu, t, gamma3, params);
        if (at_su.zone_defined && at_su.nonoverlapping()) {
            const std::size_t m0 = at_su.items.size();
            for (Eigen::Index i = iu + 1; i < stack.sigmas.size(); ++i) {
                const SupportIntervals cand = support_intervals(stack, i, t, gamma3, params);
                if (!cand.zone_defined || cand.items.size() != m0 || !cand.nonoverlapping()) break;
                accepted = i;
            }
        }
        track.raw[static_cast<std::size_t>(t)] =
            stack.sigmas.values[static_cast<std::size_t>(accepted)];
    }

    // low-pass smoothing with edge replication
    const auto len = static_cast<std::ptrdiff_t>(track.weights.size());
    const auto center = (len - 1) / 2;
    const auto n = static_cast<std::ptrdiff_t>(track.raw.size());
    track.smoothed.resize(track.raw.size());
    for (std::ptrdiff_t t = 0; t < n; ++t) {
        double acc = 0.0;
        for (std::ptrdiff_t i = 0; i < len; ++i) {
            std::ptrdiff_t k = std::clamp<std::ptrdiff_t>(t + i - center, 0, n - 1);
            acc += track.weights[static_cast<std::size_t>(i)] *
                   track.raw[static_cast<std::size_t>(k)];
        }
        track.smoothed[static_cast<std::size_t>(t)] = acc;
    }
    return track;
}

SigmaTrack estimate_sigma(const Signal& x, const SigmaGrid& sigmas, const ScaleGrid& scales,
                          Eigen::Index zeta, double ell, double gamma3,
                          std::span<const double> smoothing_weights, const WaveletParams& params) {
    const CwtMagnitudeStack stack = compute_cwt_stack(x, sigmas, scales, params);
    return estimate_sigma(stack, zeta, ell, gamma3, smoothing_weights, params);
}

std::vector<double> sigma_renyi_sst(const Signal& x, const SigmaGrid& sigmas,
                                    const ScaleGrid& scales, Eigen::Index zeta, double ell,
                                    SstOrder order, const WaveletParams& params) {
    const auto n = static_cast<Eigen::Index>(x.size());
    const auto bins = static_cast<Eigen::Index>(x.size() / 2);
    std::vector<Eigen::MatrixXf> sst_mag;
    sst_mag.reserve(static_cast<std::size_t>(sigmas.size()));
    for (double sigma : sigmas.values) {
        const TimeScalePlane w = constant_cwt(x, sigma, params, scales, Kernel::G);
        const TimeScalePlane w_db = constant_cwt(x, sigma, params, scales, Kernel::Db);
        PhasePlane phase;
        if (order == SstOrder::First) {
            phase = phase_conventional(w, w_db);
        } else {
            const TimeScalePlane w_g1 = constant_cwt(x, sigma, params, scales, Kernel::G1);
            phase = phase_conventional_2nd(w, w_db, w_g1);
        }
        sst_mag.push_back(squeeze(w, phase, bins).data.cwiseAbs().cast<float>());
    }

    std::vector<double> out(static_cast<std::size_t>(n));
    for (Eigen::Index t = 0; t < n; ++t) {
        Eigen::Index best = sigmas.size() - 1;
        double best_entropy =
            windowed_entropy(sst_mag[static_cast<std::size_t>(best)], t, zeta, ell);
        for (Eigen::Index i = sigmas.size() - 2; i >= 0; --i) {
            const double e = windowed_entropy(sst_mag[static_cast<std::size_t>(i)], t, zeta, ell);
            if (e < best_entropy) {
                best_entropy = e;
                best = i;
            }
        }
        out[static_cast<std::size_t>(t)] = sigmas.values[static_cast<std::size_t>(best)];
    }
    return out;
}

}  // namespace tvsst
