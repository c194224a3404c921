#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "oracles.hpp"
#include "tvsst/cwt.hpp"
#include "tvsst/signal.hpp"

using namespace tvsst;
using oracle::kTwoPi;

namespace {
const WaveletParams kParams = WaveletParams::make(1.0, 0.2);
}

TEST_CASE("make_scale_grid matches the dyadic formula") {
    const ScaleGrid g = make_scale_grid(256, 32, 1.0 / 256.0);
    CHECK(g.size() == 256);
    CHECK(g.scales.front() == doctest::Approx(std::exp2(1.0 / 32.0) / 256.0).epsilon(1e-15));
    CHECK(g.scales.back() == doctest::Approx(1.0).epsilon(1e-12));

    const ScaleGrid tiny = make_scale_grid(4, 1, 0.5);
    REQUIRE(tiny.size() == 2);
    CHECK(tiny.scales[0] == doctest::Approx(1.0));
    CHECK(tiny.scales[1] == doctest::Approx(2.0));

    for (std::size_t j = 1; j < g.scales.size(); ++j) CHECK(g.scales[j] > g.scales[j - 1]);
    CHECK_THROWS_AS(make_scale_grid(1, 32, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_scale_grid(64, 0, 1.0), std::invalid_argument);
}

TEST_CASE("constant-sigma transform of a pure tone matches the window response") {
    const std::size_t n = 256;
    const double c = 50.0;
    const double amp = 1.5;
    const Signal x = gen_tone(n, c, amp, /*analytic=*/true);
    const ScaleGrid grid = make_scale_grid(n, 32, x.dt());
    const TimeScalePlane w = constant_cwt(x, 1.0, kParams, grid, Kernel::G);

    double peak = 0.0;
    double peak_scale = 0.0;
    for (Eigen::Index j = 0; j < w.n_scales(); ++j) {
        const double a = grid.scales[static_cast<std::size_t>(j)];
        const double expected = amp * psi_hat(a * c, 1.0, kParams);
        for (Eigen::Index col : {static_cast<Eigen::Index>(n / 2), static_cast<Eigen::Index>(n / 3)}) {
            if (!interior_cell(w, kParams, j, col)) continue;
            if (expected < 1e-3 * amp) continue;
            CHECK(std::abs(w.data(j, col)) == doctest::Approx(expected).epsilon(0.01));
        }
        const double mag = std::abs(w.data(j, n / 2));
        if (mag > peak) {
            peak = mag;
            peak_scale = a;
        }
    }
    CHECK(peak == doctest::Approx(amp).epsilon(0.01));
    CHECK(peak_scale == doctest::Approx(kParams.mu / c).epsilon(0.03));
}

TEST_CASE("zero input gives a zero plane") {
    Signal x;
    x.samples.assign(64, {0.0, 0.0});
    x.sample_rate = 64.0;
    const ScaleGrid grid = make_scale_grid(64, 8, x.dt());
    const TimeScalePlane w = constant_cwt(x, 1.0, kParams, grid, Kernel::G);
    CHECK(w.data.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("numerical transform matches the time-domain quadrature oracle") {
    const std::size_t n = 128;
    const LfmComponent comp{1.0, 12.0, 30.0, 0.0, 0.0};
    const Signal x = gen_lfm(n, comp);
    const ScaleGrid grid = make_scale_grid(n, 16, x.dt());
    auto closure = [&comp](double t) { return comp.eval(t); };

    for (Kernel k : {Kernel::G, Kernel::G1, Kernel::G2}) {
        const TimeScalePlane w = constant_cwt(x, 1.0, kParams, grid, k);
        // a cell near the ridge at b = 0.5 (IF 27 Hz -> scale ~ mu / 27)
        const double target = kParams.mu / 27.0;
        Eigen::Index j = 0;
        while (grid.scales[static_cast<std::size_t>(j)] < target) ++j;
        const Eigen::Index col = n / 2;
        const std::complex<double> ref = oracle::time_domain_cwt(
            closure, grid.scales[static_cast<std::size_t>(j)], x.time_at(col), 1.0, kParams, k);
        CHECK(std::abs(w.data(j, col) - ref) < 1e-5 * std::abs(ref) + 1e-9);
    }
}

TEST_CASE("time-derivative plane matches a finite-difference oracle") {
    const std::size_t n = 128;
    const LfmComponent comp{1.0, 12.0, 30.0, 0.0, 0.0};
    const Signal x = gen_lfm(n, comp);
    const ScaleGrid grid = make_scale_grid(n, 16, x.dt());
    const TimeScalePlane w_db = constant_cwt(x, 1.0, kParams, grid, Kernel::Db);
    auto closure = [&comp](double t) { return comp.eval(t); };

    const double target = kParams.mu / 27.0;
    Eigen::Index j = 0;
    while (grid.scales[static_cast<std::size_t>(j)] < target) ++j;
    const Eigen::Index col = n / 2;
    const std::complex<double> ref = oracle::time_domain_cwt_db(
        closure, grid.scales[static_cast<std::size_t>(j)], x.time_at(col), 1.0, kParams);
    CHECK(std::abs(w_db.data(j, col) - ref) < 1e-4 * std::abs(ref));
}

TEST_CASE("chirp closed form: tone reduction, ridge magnitude, duration minimum") {
    const LfmComponent tone{2.0, 10.0, 0.0, 0.0, 0.0};
    const double a = 0.08;
    const double b = 0.4;
    const std::complex<double> v = chirp_cwt_closed_form(tone, a, b, 1.0, kParams);
    const std::complex<double> expected =
        2.0 * psi_hat(a * 10.0, 1.0, kParams) * std::polar(1.0, kTwoPi * b * 10.0);
    CHECK(std::abs(v - expected) < 1e-12);

    // at the ridge a = mu / (c + r b) the magnitude is A (1 + (2 pi sigma^2 a^2 r)^2)^{-1/4}
    const LfmComponent chirp{1.0, 12.0, 50.0, 0.0, 0.0};
    const double fr = 12.0 + 50.0 * b;
    const double ar = kParams.mu / fr;
    const double sa2 = 1.0 * 1.0 * ar * ar;
    const double expected_mag = 1.0 / std::pow(1.0 + std::pow(kTwoPi * sa2 * 50.0, 2.0), 0.25);
    CHECK(std::abs(chirp_cwt_closed_form(chirp, ar, b, 1.0, kParams)) ==
          doctest::Approx(expected_mag).epsilon(1e-12));

    // |h| has duration L = 2 alpha sqrt(1/(a sigma)^2 + (2 pi r a sigma)^2),
    // minimized at sigma* = 1 / (a sqrt(2 pi |r|))
    auto duration = [&](double sigma) {
        const double inv = 1.0 / (ar * sigma);
        const double lin = kTwoPi * 50.0 * ar * sigma;
        return 2.0 * kParams.alpha * std::sqrt(inv * inv + lin * lin);
    };
    const double sigma_star = 1.0 / (ar * std::sqrt(kTwoPi * 50.0));
    CHECK(duration(sigma_star * 1.05) > duration(sigma_star));
    CHECK(duration(sigma_star * 0.95) > duration(sigma_star));

    CHECK_THROWS_AS(chirp_cwt_closed_form(LfmComponent{1.0, 5.0, 0.0, 0.1, 0.0}, a, b, 1.0, kParams),
                    std::invalid_argument);
    CHECK_THROWS_AS(chirp_cwt_closed_form(chirp, -1.0, b, 1.0, kParams), std::invalid_argument);
}

TEST_CASE("numerical transform of a linear chirp matches the closed form") {
    const std::size_t n = 256;
    const LfmComponent comp{1.0, 12.0, 50.0, 0.0, 0.0};
    const Signal x = gen_lfm(n, comp);
    const ScaleGrid grid = make_scale_grid(n, 32, x.dt());
    const TimeScalePlane w = constant_cwt(x, 1.0, kParams, grid, Kernel::G);

    const double max_mag = w.data.cwiseAbs().maxCoeff();
    double worst = 0.0;
    int counted = 0;
    for (Eigen::Index j = 0; j < w.n_scales(); ++j) {
        for (Eigen::Index col = 0; col < w.n_times(); col += 5) {
            const std::complex<double> got = w.data(j, col);
            if (std::abs(got) <= 1e-3 * max_mag) continue;
            if (!interior_cell(w, kParams, j, col)) continue;
            const std::complex<double> ref = chirp_cwt_closed_form(
                comp, grid.scales[static_cast<std::size_t>(j)], x.time_at(col), 1.0, kParams);
            worst = std::max(worst, std::abs(got - ref) / std::abs(ref));
            ++counted;
        }
    }
    CHECK(counted > 500);
    CHECK(worst < 1e-3);
}

TEST_CASE("linearity of the transform") {
    const std::size_t n = 128;
    const Signal x = gen_tone(n, 20.0, 1.0, true);
    const Signal y = gen_tone(n, 33.0, 0.7, true);
    Signal sum = x;
    for (std::size_t k = 0; k < n; ++k) sum.samples[k] += y.samples[k];

    const ScaleGrid grid = make_scale_grid(n, 8, x.dt());
    const TimeScalePlane wx = constant_cwt(x, 1.0, kParams, grid, Kernel::G);
    const TimeScalePlane wy = constant_cwt(y, 1.0, kParams, grid, Kernel::G);
    const TimeScalePlane ws = constant_cwt(sum, 1.0, kParams, grid, Kernel::G);
    const double scale = ws.data.cwiseAbs().maxCoeff();
    CHECK(((wx.data + wy.data) - ws.data).cwiseAbs().maxCoeff() < 1e-12 * scale);
}

TEST_CASE("cyclic time-shift covariance for constant sigma") {
    const std::size_t n = 128;
    const std::size_t shift = 16;
    // content confined to the first n - shift samples so the cyclic shift has
    // no wraparound inside the padded window
    Signal x;
    x.sample_rate = static_cast<double>(n);
    x.samples.assign(n, {0.0, 0.0});
    for (std::size_t k = 0; k < n - shift; ++k) {
        const double t = static_cast<double>(k) / static_cast<double>(n);
        x.samples[k] = std::polar(1.0, kTwoPi * 24.0 * t);
    }
    Signal y = x;
    for (std::size_t k = n; k-- > shift;) y.samples[k] = x.samples[k - shift];
    for (std::size_t k = 0; k < shift; ++k) y.samples[k] = 0.0;

    const ScaleGrid grid = make_scale_grid(n, 8, x.dt());
    const TimeScalePlane wx = constant_cwt(x, 1.0, kParams, grid, Kernel::G);
    const TimeScalePlane wy = constant_cwt(y, 1.0, kParams, grid, Kernel::G);
    const double scale = wx.data.cwiseAbs().maxCoeff();
    for (Eigen::Index j = 0; j < wx.n_scales(); ++j) {
        for (std::size_t col = shift; col < n; ++col) {
            CHECK(std::abs(wy.data(j, static_cast<Eigen::Index>(col)) -
                           wx.data(j, static_cast<Eigen::Index>(col - shift))) < 1e-12 * scale);
        }
    }
}

TEST_CASE("kernel identities on a pure tone") {
    const std::size_t n = 256;
    const double c = 40.0;
    const Signal x = gen_tone(n, c, 1.0, true);
    const ScaleGrid grid = make_scale_grid(n, 16, x.dt());
    const double sigma = 1.3;
    const TimeScalePlane w = constant_cwt(x, sigma, kParams, grid, Kernel::G);
    const TimeScalePlane w_g2 = constant_cwt(x, sigma, kParams, grid, Kernel::G2);
    const TimeScalePlane w_db = constant_cwt(x, sigma, kParams, grid, Kernel::Db);

    for (Eigen::Index j = 0; j < w.n_scales(); ++j) {
        const double a = grid.scales[static_cast<std::size_t>(j)];
        const double factor =
            4.0 * oracle::kPi * oracle::kPi * sigma * sigma * (a * c - kParams.mu) * (a * c - kParams.mu) - 1.0;
        for (Eigen::Index col = 0; col < w.n_times(); col += 37) {
            if (std::abs(w.data(j, col)) < 1e-4) continue;
            if (!interior_cell(w, kParams, j, col, 2.0)) continue;
            // W_g2 = (4 pi^2 sigma^2 (a c - mu)^2 - 1) W for the Morlet window
            CHECK(std::abs(w_g2.data(j, col) - factor * w.data(j, col)) <
                  1e-6 * std::abs(w.data(j, col)) * std::max(1.0, std::abs(factor)));
            // time-derivative plane of a tone is i 2 pi c W
            const std::complex<double> expected = std::complex<double>(0.0, kTwoPi * c) * w.data(j, col);
            CHECK(std::abs(w_db.data(j, col) - expected) < 1e-9 * std::abs(expected));
        }
    }
}

TEST_CASE("d_scale on polynomial planes") {
    const ScaleGrid grid = make_scale_grid(64, 8, 1.0 / 64.0);
    const auto rows = grid.size();
    Eigen::MatrixXcd constant(rows, 3), linear(rows, 3), quad(rows, 3);
    for (Eigen::Index j = 0; j < rows; ++j) {
        const double a = grid.scales[static_cast<std::size_t>(j)];
        constant.row(j).setConstant(2.5);
        linear.row(j).setConstant(a);
        quad.row(j).setConstant(a * a);
    }
    CHECK(d_scale(constant, grid.scales).cwiseAbs().maxCoeff() < 1e-12);

    const Eigen::MatrixXcd dl = d_scale(linear, grid.scales);
    for (Eigen::Index j = 0; j < rows; ++j) {
        CHECK(std::abs(dl(j, 1) - 1.0) < 1e-10);
    }
    const Eigen::MatrixXcd dq = d_scale(quad, grid.scales);
    for (Eigen::Index j = 1; j + 1 < rows; ++j) {
        const double a = grid.scales[static_cast<std::size_t>(j)];
        CHECK(std::abs(dq(j, 0) - 2.0 * a) < 1e-8 * std::max(1.0, 2.0 * a));
    }

    Eigen::MatrixXcd two_rows(2, 3);
    two_rows.setZero();
    CHECK_THROWS_AS(d_scale(two_rows, {0.1, 0.2}), std::invalid_argument);
}

TEST_CASE("adaptive transform validation and errors") {
    const std::size_t n = 128;
    const Signal x = gen_tone(n, 30.0, 1.0, true);
    const ScaleGrid grid = make_scale_grid(n, 8, x.dt());

    std::vector<double> short_track(n - 1, 1.0);
    CHECK_THROWS_AS(adaptive_cwt(x, short_track, kParams, grid, Kernel::G), std::invalid_argument);
    std::vector<double> low_track(n, 0.05);
    CHECK_THROWS_AS(adaptive_cwt(x, low_track, kParams, grid, Kernel::G), std::invalid_argument);

    // a varying track uses the requested sigma at each column
    std::vector<double> track(n);
    for (std::size_t k = 0; k < n; ++k) track[k] = 0.8 + 0.4 * static_cast<double>(k) / n;
    const TimeScalePlane w = adaptive_cwt(x, track, kParams, grid, Kernel::G);
    CHECK(w.sigma_track == track);
    const Eigen::Index col = n / 2;
    const TimeScalePlane fixed = constant_cwt(x, track[n / 2], kParams, grid, Kernel::G);
    CHECK((w.data.col(col) - fixed.data.col(col)).cwiseAbs().maxCoeff() < 1e-14);

    // snapping quantizes the stored track to the step grid
    const TimeScalePlane snapped = adaptive_cwt(x, track, kParams, grid, Kernel::G, 0.05);
    for (double s : snapped.sigma_track) {
        CHECK(std::abs(s / 0.05 - std::round(s / 0.05)) < 1e-9);
    }
}
