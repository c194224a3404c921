#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "oracles.hpp"
#include "tvsst/signal.hpp"

using namespace tvsst;
using oracle::kTwoPi;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name, const std::string& content)
        : path("tvsst_test_" + name) {
        std::ofstream out(path);
        out << content;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("gen_two_chirps samples the stated pair of chirps") {
    const Signal x = gen_two_chirps(256);
    CHECK(x.size() == 256);
    CHECK(x.sample_rate == 256.0);
    CHECK(x.is_real);
    CHECK(x.samples[0].real() == doctest::Approx(2.0).epsilon(1e-15));
    // direct evaluation of the two cosines at a few grid points
    for (std::size_t k : {1u, 51u, 128u, 255u}) {
        const double t = static_cast<double>(k) / 256.0;
        const double expected = std::cos(kTwoPi * (12.0 * t + 25.0 * t * t)) +
                                std::cos(kTwoPi * (34.0 * t + 32.0 * t * t));
        CHECK(x.samples[k].real() == doctest::Approx(expected).epsilon(1e-14));
        CHECK(x.samples[k].imag() == 0.0);
    }
    CHECK_THROWS_AS(gen_two_chirps(1), std::invalid_argument);

    // analytic IF laws stay positive, increasing and non-crossing on the grid
    const auto laws = two_chirps_laws();
    double prev0 = 0.0, prev1 = 0.0;
    for (int k = 0; k <= 256; ++k) {
        const double t = k / 256.0;
        const double f0 = laws[0].phi1(t);
        const double f1 = laws[1].phi1(t);
        CHECK(f0 > 0.0);
        CHECK(f1 > f0);
        if (k > 0) {
            CHECK(f0 > prev0);
            CHECK(f1 > prev1);
        }
        prev0 = f0;
        prev1 = f1;
    }

    // generators are bit-identical across calls
    const Signal y = gen_two_chirps(256);
    for (std::size_t k = 0; k < x.size(); ++k) CHECK(x.samples[k] == y.samples[k]);

    // components sum to the signal
    const auto parts = two_chirps_components(256);
    for (std::size_t k = 0; k < x.size(); ++k) {
        CHECK(x.samples[k].real() ==
              doctest::Approx(parts[0].samples[k].real() + parts[1].samples[k].real())
                  .epsilon(1e-14));
    }
}

TEST_CASE("gen_three_component values and IF law") {
    const Signal x = gen_three_component(512);
    CHECK(x.sample_rate == 512.0);
    const double expected0 = 1.0 + 2.0 * std::cos(30.0);
    CHECK(x.samples[0].real() == doctest::Approx(expected0).epsilon(1e-14));
    for (std::size_t k : {7u, 100u, 400u}) {
        const double t = static_cast<double>(k) / 512.0;
        const double expected = std::cos(16.0 * oracle::kPi * t) +
                                std::cos(96.0 * oracle::kPi * t + 30.0 * std::cos(4.0 * oracle::kPi * t)) +
                                std::cos(180.0 * oracle::kPi * t + 30.0 * std::cos(4.0 * oracle::kPi * t));
        CHECK(x.samples[k].real() == doctest::Approx(expected).epsilon(1e-13));
    }

    // IF of the second mode: differentiate the phase numerically and compare
    // with the stated law 48 - 60 sin(4 pi t)
    const auto laws = three_component_laws();
    auto phase2 = [](double t) { return (96.0 * oracle::kPi * t + 30.0 * std::cos(4.0 * oracle::kPi * t)); };
    for (double t : {0.1, 0.33, 0.61}) {
        const double h = 1e-6;
        const double numeric = (phase2(t + h) - phase2(t - h)) / (2.0 * h) / kTwoPi;
        CHECK(laws[1].phi1(t) == doctest::Approx(numeric).epsilon(1e-6));
        CHECK(laws[1].phi1(t) == doctest::Approx(48.0 - 60.0 * std::sin(4.0 * oracle::kPi * t)).epsilon(1e-12));
    }
}

TEST_CASE("add_noise meets requested SNR, preserves metadata, deterministic") {
    const Signal x = gen_three_component(512);

    // near-infinite SNR leaves the signal essentially untouched
    const Signal quiet = add_noise(x, 300.0, 7);
    double max_rel = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        max_rel = std::max(max_rel, std::abs(quiet.samples[k].real() - x.samples[k].real()));
    }
    CHECK(max_rel < 1e-10);

    const Signal noisy = add_noise(x, 10.0, 42);
    CHECK(noisy.size() == x.size());
    CHECK(noisy.sample_rate == x.sample_rate);
    CHECK(noisy.t0 == x.t0);
    double ps = 0.0, pn = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        ps += std::norm(x.samples[k]);
        pn += std::norm(noisy.samples[k] - x.samples[k]);
    }
    const double measured_db = 10.0 * std::log10(ps / pn);
    CHECK(measured_db == doctest::Approx(10.0).epsilon(0.05));  // within +-0.5 dB

    const Signal again = add_noise(x, 10.0, 42);
    for (std::size_t k = 0; k < x.size(); ++k) CHECK(noisy.samples[k] == again.samples[k]);
    const Signal other_seed = add_noise(x, 10.0, 43);
    CHECK(other_seed.samples[0] != noisy.samples[0]);

    CHECK_THROWS_AS(add_noise(x, std::nan(""), 1), std::invalid_argument);
}

TEST_CASE("load_csv formats and failure modes") {
    TempFile real_file("real.csv", "# comment\n# sample_rate=142857.14\n1.0\n-2.5\n0.25\n");
    const Signal s = load_csv(real_file.path);
    CHECK(s.size() == 3);
    CHECK(s.sample_rate == doctest::Approx(142857.14));
    CHECK(s.is_real);
    CHECK(s.samples[1].real() == -2.5);

    TempFile complex_file("cplx.csv", "1.0,0.5\n2.0,-0.25\n");
    const Signal c = load_csv(complex_file.path, 400.0);
    CHECK_FALSE(c.is_real);
    CHECK(c.samples[1].imag() == -0.25);

    TempFile empty_file("empty.csv", "");
    CHECK_THROWS_AS(load_csv(empty_file.path, 100.0), std::runtime_error);

    TempFile no_rate("norate.csv", "1.0\n2.0\n");
    CHECK_THROWS_AS(load_csv(no_rate.path), std::runtime_error);
    CHECK(load_csv(no_rate.path, 100.0).sample_rate == 100.0);

    TempFile bad("bad.csv", "1.0\nnope\n");
    CHECK_THROWS_WITH_AS(load_csv(bad.path, 10.0), doctest::Contains("line 2"),
                         std::runtime_error);

    CHECK_THROWS_AS(load_csv("does_not_exist_anywhere.csv"), std::runtime_error);
}

TEST_CASE("LfmComponent evaluation") {
    const LfmComponent comp{2.0, 12.0, 50.0, 0.0, 0.0};
    const auto v = comp.eval(0.5);
    const double phase = kTwoPi * (12.0 * 0.5 + 25.0 * 0.25);
    CHECK(v.real() == doctest::Approx(2.0 * std::cos(phase)).epsilon(1e-14));
    CHECK(v.imag() == doctest::Approx(2.0 * std::sin(phase)).epsilon(1e-14));

    const LfmComponent grow{1.0, 5.0, 0.0, 0.3, -0.1};
    CHECK(std::abs(grow.eval(1.0)) ==
          doctest::Approx(std::exp(0.3 - 0.05)).epsilon(1e-14));
}
