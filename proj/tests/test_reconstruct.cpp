#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "oracles.hpp"
#include "tvsst/reconstruct.hpp"
#include "tvsst/signal.hpp"
#include "tvsst/sst.hpp"

using namespace tvsst;

namespace {
const WaveletParams kParams = WaveletParams::make(1.0, 0.2);

struct Pipeline {
    TimeScalePlane w;
    PhasePlane phase;
    TimeFreqPlane tf;
};

Pipeline run_first_order(const Signal& x, double sigma, double gamma_rel = 1e-5) {
    const ScaleGrid grid = make_scale_grid(x.size(), 32, x.dt());
    Pipeline p;
    p.w = constant_cwt(x, sigma, kParams, grid, Kernel::G);
    const TimeScalePlane w_db = constant_cwt(x, sigma, kParams, grid, Kernel::Db);
    p.phase = phase_conventional(p.w, w_db, gamma_rel);
    p.tf = squeeze(p.w, p.phase, static_cast<Eigen::Index>(x.size() / 2));
    return p;
}
}  // namespace

TEST_CASE("relative_rmse basics") {
    const Signal a = gen_tone(64, 5.0);
    CHECK(relative_rmse(a, a, 0.0, 1.0) == 0.0);

    Signal neg = a;
    for (auto& v : neg.samples) v = -v;
    CHECK(relative_rmse(a, neg, 0.0, 1.0) == doctest::Approx(2.0).epsilon(1e-14));

    Signal scaled = a;
    for (auto& v : scaled.samples) v *= 1.01;
    CHECK(relative_rmse(a, scaled, 0.0, 1.0) == doctest::Approx(0.01).epsilon(1e-12));

    Signal shorter = a;
    shorter.samples.pop_back();
    CHECK_THROWS_AS(relative_rmse(a, shorter, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("full recovery of a real tone from scale and frequency planes") {
    const Signal x = gen_tone(256, 50.0);
    const Pipeline p = run_first_order(x, 1.0);

    const Signal from_cwt = recover_signal(p.w, kParams, RecoveryMode::Real);
    CHECK(relative_rmse(x, from_cwt, 0.1, 0.9) < 0.02);

    const Signal from_sst = recover_signal(p.tf, kParams, RecoveryMode::Real);
    CHECK(relative_rmse(x, from_sst, 0.1, 0.9) < 0.02);
}

TEST_CASE("analytic chirp recovery") {
    const LfmComponent comp{1.0, 12.0, 50.0, 0.0, 0.0};
    const Signal x = gen_lfm(256, comp);
    const Pipeline p = run_first_order(x, 1.0);
    const Signal recovered = recover_signal(p.w, kParams, RecoveryMode::Analytic);
    CHECK(relative_rmse(x, recovered, 0.1, 0.9) < 0.02);
}

TEST_CASE("zero plane recovers the zero signal") {
    Signal x;
    x.samples.assign(64, {0.0, 0.0});
    x.sample_rate = 64.0;
    const ScaleGrid grid = make_scale_grid(64, 8, x.dt());
    const TimeScalePlane w = constant_cwt(x, 1.0, kParams, grid, Kernel::G);
    const Signal recovered = recover_signal(w, kParams, RecoveryMode::Real);
    for (const auto& v : recovered.samples) CHECK(std::abs(v) == 0.0);
}

TEST_CASE("squeezed and scale-plane recoveries agree when nothing is dropped") {
    // with a tiny threshold every squeezed column carries the same mass as
    // the scale sum restricted to in-range cells, which for a tone is all of
    // the meaningful plane
    const Signal x = gen_tone(256, 50.0, 1.0, /*analytic=*/true);
    const Pipeline p = run_first_order(x, 1.0, 1e-13);
    const Signal a = recover_signal(p.w, kParams, RecoveryMode::Analytic);
    const Signal b = recover_signal(p.tf, kParams, RecoveryMode::Analytic);
    double num = 0.0, den = 0.0;
    for (std::size_t k = 25; k < 230; ++k) {
        num += std::norm(a.samples[k] - b.samples[k]);
        den += std::norm(a.samples[k]);
    }
    CHECK(std::sqrt(num / den) < 1e-10);
}

TEST_CASE("ridge extraction on two tones") {
    const std::size_t n = 64;
    Signal x = gen_tone(n, 5.0);
    const Signal y = gen_tone(n, 25.0, 2.0);
    for (std::size_t k = 0; k < n; ++k) x.samples[k] += y.samples[k];
    const Pipeline p = run_first_order(x, 1.0);

    const RidgeSet ridges = extract_ridges(p.tf, 2, 2);
    REQUIRE(ridges.bins.size() == 2);
    CHECK(ridges.complete);
    // the louder 25 Hz tone is found first; bins are 1 Hz wide
    for (std::size_t t = 8; t < 56; ++t) {
        CHECK(std::abs(p.tf.bin_freq(ridges.bins[0][t]) - 25.0) <= 1.0);
        CHECK(std::abs(p.tf.bin_freq(ridges.bins[1][t]) - 5.0) <= 1.0);
    }
    // extracted ridges keep their bands disjoint
    for (std::size_t t = 0; t < n; ++t) {
        CHECK(std::abs(ridges.bins[0][t] - ridges.bins[1][t]) > 2 * 2);
    }

    // asking for more components than the plane holds flags the result
    const RidgeSet more = extract_ridges(p.tf, 4, 2);
    CHECK_FALSE(more.complete);
    CHECK(more.bins.size() < 4);
}

TEST_CASE("single-component extraction finds the tone ridge") {
    const Signal x = gen_tone(128, 40.0);
    const Pipeline p = run_first_order(x, 1.0);
    const RidgeSet ridges = extract_ridges(p.tf, 1, 2);
    REQUIRE(ridges.bins.size() == 1);
    for (std::size_t t = 16; t < 112; ++t) {
        CHECK(std::abs(p.tf.bin_freq(ridges.bins[0][t]) - 40.0) <= 1.0);
    }
}

TEST_CASE("component recovery around a ridge") {
    const std::size_t n = 256;
    const Signal x = gen_tone(n, 50.0);
    const Pipeline p = run_first_order(x, 1.0);
    const RidgeSet ridges = extract_ridges(p.tf, 1, 2);
    REQUIRE(ridges.bins.size() == 1);

    const Component comp = recover_component(p.tf, ridges.bins[0], 2, kParams);
    CHECK(relative_rmse(x, comp.signal, 0.1, 0.9) < 0.02);
    // with the band covering all tone mass this matches the full recovery
    const Signal full = recover_signal(p.tf, kParams, RecoveryMode::Real);
    double diff = 0.0;
    for (std::size_t k = 25; k < 230; ++k) {
        diff = std::max(diff, std::abs(comp.signal.samples[k] - full.samples[k]));
    }
    CHECK(diff < 0.02);

    // a zero band integrates a single bin: degraded but finite
    const Component narrow = recover_component(p.tf, ridges.bins[0], 0, kParams);
    for (const auto& v : narrow.signal.samples) CHECK(std::isfinite(v.real()));

    std::vector<Eigen::Index> bad_ridge(n - 1, 0);
    CHECK_THROWS_AS(recover_component(p.tf, bad_ridge, 2, kParams), std::invalid_argument);
}

TEST_CASE("band recoveries add up to the full-plane recovery") {
    const std::size_t n = 128;
    Signal x = gen_tone(n, 12.0);
    const Signal y = gen_tone(n, 40.0, 1.5);
    for (std::size_t k = 0; k < n; ++k) x.samples[k] += y.samples[k];
    const Pipeline p = run_first_order(x, 1.0);
    const RidgeSet ridges = extract_ridges(p.tf, 2, 3);
    REQUIRE(ridges.bins.size() == 2);

    const Component c0 = recover_component(p.tf, ridges.bins[0], 3, kParams);
    const Component c1 = recover_component(p.tf, ridges.bins[1], 3, kParams);
    const Signal full = recover_signal(p.tf, kParams, RecoveryMode::Real);
    double worst = 0.0;
    for (std::size_t k = 15; k < 113; ++k) {
        const double sum = c0.signal.samples[k].real() + c1.signal.samples[k].real();
        worst = std::max(worst, std::abs(sum - full.samples[k].real()));
    }
    CHECK(worst < 5e-3);
}
