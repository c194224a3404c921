#include "tvsst/separability.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace tvsst {

namespace {

constexpr double kPi = std::numbers::pi;

void check_sigma(double sigma, const WaveletParams& params, const char* who) {
    if (sigma < params.sigma_min() - 1e-12) {
        throw std::invalid_argument(std::string(who) + ": sigma below alpha/mu");
    }
}

std::vector<IfSample> sorted_samples(const std::vector<IfLaw>& laws, double b, const char* who) {
    if (laws.size() < 2) throw std::invalid_argument(std::string(who) + ": need at least 2 laws");
    std::vector<IfSample> s = eval_laws(laws, b);
    for (std::size_t k = 1; k < s.size(); ++k) {
        if (!(s[k].phi1 > s[k - 1].phi1)) {
            throw std::invalid_argument(std::string(who) +
                                        ": laws must have strictly increasing frequencies");
        }
    }
    return s;
}

}  // namespace

std::vector<IfSample> eval_laws(const std::vector<IfLaw>& laws, double b) {
    std::vector<IfSample> out;
    out.reserve(laws.size());
    for (const auto& law : laws) out.push_back({law.phi1(b), law.phi2(b)});
    return out;
}

ZoneBounds zone_bounds(double phi1, double phi2, double sigma, const WaveletParams& params) {
    if (!(phi1 > 0.0)) throw std::invalid_argument("zone_bounds: frequency must be positive");
    check_sigma(sigma, params, "zone_bounds");
    const double A = params.alpha;
    const double mu = params.mu;
    const double r = std::abs(phi2);

    const double rad_upper = phi1 * phi1 - 8.0 * kPi * A * (A + mu * sigma) * r;
    if (rad_upper < 0.0) {
        throw std::domain_error("zone_bounds: component zone undefined at this sigma");
    }
    const double rad_lower = phi1 * phi1 + 8.0 * kPi * A * (mu * sigma - A) * r;

    ZoneBounds z;
    z.upper = 2.0 * (mu + A / sigma) / (phi1 + std::sqrt(rad_upper));
    z.lower = 2.0 * (mu - A / sigma) / (phi1 + std::sqrt(rad_lower));
    return z;
}

ZoneCoefficients ZoneCoefficients::make(const IfSample& lo, const IfSample& hi,
                                        const WaveletParams& params) {
    const double A = params.alpha;
    const double mu = params.mu;
    const double r_lo = std::abs(lo.phi2);
    const double r_hi = std::abs(hi.phi2);
    const double s = r_lo + r_hi;
    const double p = hi.phi1 * r_lo + lo.phi1 * r_hi;
    const double gap = hi.phi1 - lo.phi1;
    const double sum = hi.phi1 + lo.phi1;

    ZoneCoefficients zc;
    zc.alpha_k = 2.0 * kPi * A * mu * s * s;
    zc.beta_k = p * gap + 4.0 * kPi * A * A * (r_hi * r_hi - r_lo * r_lo);
    zc.gamma_k = (A / mu) * (p * sum + 2.0 * kPi * A * A * (r_hi - r_lo) * (r_hi - r_lo));
    zc.upsilon_k = zc.beta_k * zc.beta_k - 4.0 * zc.alpha_k * zc.gamma_k;
    return zc;
}

double sigma1(const std::vector<IfLaw>& laws, double b, const WaveletParams& params) {
    const std::vector<IfSample> s = sorted_samples(laws, b, "sigma1");
    double best = 0.0;
    for (std::size_t k = 1; k < s.size(); ++k) {
        const double gap = s[k].phi1 - s[k - 1].phi1;
        best = std::max(best, (params.alpha / params.mu) * (s[k].phi1 + s[k - 1].phi1) / gap);
    }
    return best;
}

Sigma2Result sigma2(const std::vector<IfLaw>& laws, double b, const WaveletParams& params) {
    if (laws.size() < 2) throw std::invalid_argument("sigma2: need at least 2 laws");
    const std::vector<IfSample> s = eval_laws(laws, b);

    Sigma2Result result;
    result.cond1_holds = true;
    double lower = params.sigma_min();
    double upper = std::numeric_limits<double>::infinity();
    bool feasible = true;
    for (std::size_t k = 1; k < s.size(); ++k) {
        const double gap = s[k].phi1 - s[k - 1].phi1;
        if (!(gap > 0.0)) {
            // crossing laws: no finite width separates the pair
            feasible = false;
            result.cond1_holds = false;
            continue;
        }
        const double chirp_sum = std::abs(s[k].phi2) + std::abs(s[k - 1].phi2);
        if (chirp_sum == 0.0) {
            lower = std::max(lower,
                             (params.alpha / params.mu) * (s[k].phi1 + s[k - 1].phi1) / gap);
            continue;
        }
        const ZoneCoefficients zc = ZoneCoefficients::make(s[k - 1], s[k], params);
        result.pairs.push_back(zc);
        result.cond1_holds = result.cond1_holds &&
                             (4.0 * params.alpha * std::sqrt(kPi) * std::sqrt(chirp_sum) <= gap);
        if (zc.upsilon_k < 0.0) {
            feasible = false;
            continue;
        }
        const double root = std::sqrt(zc.upsilon_k);
        lower = std::max(lower, (zc.beta_k - root) / (2.0 * zc.alpha_k));
        upper = std::min(upper, (zc.beta_k + root) / (2.0 * zc.alpha_k));
    }
    // The admissible intervals of all pairs must intersect; otherwise no
    // single width works even though each pair alone is separable.
    if (feasible && lower <= upper) result.sigma = lower;
    return result;
}

SeparationCheck check_separated(const std::vector<IfLaw>& laws, double sigma, double b,
                                const WaveletParams& params) {
    check_sigma(sigma, params, "check_separated");
    SeparationCheck check;
    if (laws.size() < 2) return check;  // vacuously separated
    const std::vector<IfSample> s = sorted_samples(laws, b, "check_separated");
    for (std::size_t k = 1; k < s.size(); ++k) {
        const ZoneBounds below = zone_bounds(s[k - 1].phi1, s[k - 1].phi2, sigma, params);
        const ZoneBounds above = zone_bounds(s[k].phi1, s[k].phi2, sigma, params);
        // the higher-frequency component occupies smaller scales; its upper
        // bound must stay below the lower bound of the component beneath it
        const double margin = below.lower - above.upper;
        check.margins.push_back(margin);
        if (margin < 0.0) check.separated = false;
    }
    return check;
}

}  // namespace tvsst
