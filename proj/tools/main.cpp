#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tvsst/estimation.hpp"
#include "tvsst/io.hpp"
#include "tvsst/reconstruct.hpp"
#include "tvsst/separability.hpp"
#include "tvsst/sst.hpp"

namespace fs = std::filesystem;
using namespace tvsst;

namespace {

struct Options {
    std::string signal = "two-chirps";
    std::size_t n = 256;
    double tone_freq = 50.0;
    std::string input;
    double fs_override = 0.0;
    double snr_db = 0.0;
    bool add_noise_flag = false;
    std::uint64_t seed = 1;

    double mu = 1.0;
    double tau0 = 0.2;
    int voices = 32;
    double sigma = 1.0;
    bool estimate = false;
    double sigma_hi = 10.0;
    double sigma_lo = 0.5;
    double sigma_step = 0.05;
    double ell = 2.5;
    int zeta = 4;
    double gamma3 = 0.2;
    double gamma_rel = 1e-5;
    int smooth_len = 5;
    int band = 2;
    int jump = 3;
    std::size_t components = 2;
    std::string laws;
    bool renyi_sst = false;
    std::string out_dir = "out";
};

void add_common(CLI::App* cmd, Options& opt) {
    cmd->add_option("--signal", opt.signal, "two-chirps, three-component, tone or csv")
        ->check(CLI::IsMember({"two-chirps", "three-component", "tone", "csv"}));
    cmd->add_option("--n", opt.n, "sample count for generated signals");
    cmd->add_option("--freq", opt.tone_freq, "tone frequency in Hz");
    cmd->add_option("--input", opt.input, "CSV file for --signal csv");
    cmd->add_option("--fs", opt.fs_override, "sample rate override for CSV input");
    cmd->add_option("--snr", opt.snr_db, "add white Gaussian noise at this SNR (dB)");
    cmd->add_option("--seed", opt.seed, "noise generator seed");
    cmd->add_option("--mu", opt.mu, "wavelet center frequency");
    cmd->add_option("--tau0", opt.tau0, "support threshold");
    cmd->add_option("--voices", opt.voices, "voices per octave");
    cmd->add_option("--sigma-max", opt.sigma_hi, "largest window width in the search grid");
    cmd->add_option("--sigma-min", opt.sigma_lo, "smallest window width in the search grid");
    cmd->add_option("--sigma-step", opt.sigma_step, "window width grid step");
    cmd->add_option("--ell", opt.ell, "entropy order");
    cmd->add_option("--zeta", opt.zeta, "entropy half-window in samples");
    cmd->add_option("--gamma3", opt.gamma3, "peak threshold relative to the plane maximum");
    cmd->add_option("--gamma-rel", opt.gamma_rel, "phase-transform validity threshold");
    cmd->add_option("--smooth", opt.smooth_len, "length of the uniform smoothing window");
    cmd->add_option("--out", opt.out_dir, "output directory");
}

Signal build_signal(const Options& opt) {
    Signal x;
    if (opt.signal == "two-chirps") {
        x = gen_two_chirps(opt.n);
    } else if (opt.signal == "three-component") {
        x = gen_three_component(opt.n);
    } else if (opt.signal == "tone") {
        x = gen_tone(opt.n, opt.tone_freq);
    } else {
        std::optional<double> fs;
        if (opt.fs_override > 0.0) fs = opt.fs_override;
        x = load_csv(opt.input, fs);
    }
    if (opt.add_noise_flag) x = add_noise(x, opt.snr_db, opt.seed);
    return x;
}

std::vector<IfLaw> parse_laws(const std::string& text) {
    std::vector<IfLaw> laws;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto semi = text.find(';', pos);
        if (semi == std::string::npos) semi = text.size();
        const std::string piece = text.substr(pos, semi - pos);
        auto comma = piece.find(',');
        if (comma == std::string::npos) {
            throw std::invalid_argument("laws: expected \"c,r\" at position " +
                                        std::to_string(pos));
        }
        try {
            laws.push_back(lfm_law(std::stod(piece.substr(0, comma)),
                                   std::stod(piece.substr(comma + 1))));
        } catch (const std::exception&) {
            throw std::invalid_argument("laws: bad number at position " + std::to_string(pos));
        }
        pos = semi + 1;
    }
    if (laws.empty()) throw std::invalid_argument("laws: empty specification");
    return laws;
}

Metadata base_metadata(const Options& opt, const std::string& command) {
    Metadata meta;
    meta.emplace_back("command", command);
    meta.emplace_back("signal", opt.signal);
    meta.emplace_back("n", std::to_string(opt.n));
    if (opt.signal == "tone") meta.emplace_back("freq", format_number(opt.tone_freq));
    if (opt.signal == "csv") meta.emplace_back("input", opt.input);
    if (opt.add_noise_flag) {
        meta.emplace_back("snr_db", format_number(opt.snr_db));
        meta.emplace_back("seed", std::to_string(opt.seed));
    }
    meta.emplace_back("mu", format_number(opt.mu));
    meta.emplace_back("tau0", format_number(opt.tau0));
    meta.emplace_back("voices", std::to_string(opt.voices));
    meta.emplace_back("sigma_range", format_number(opt.sigma_lo) + ".." + format_number(opt.sigma_hi));
    meta.emplace_back("sigma_step", format_number(opt.sigma_step));
    meta.emplace_back("ell", format_number(opt.ell));
    meta.emplace_back("zeta", std::to_string(opt.zeta));
    meta.emplace_back("gamma3", format_number(opt.gamma3));
    meta.emplace_back("gamma_rel", format_number(opt.gamma_rel));
    meta.emplace_back("smooth", std::to_string(opt.smooth_len));
    return meta;
}

std::vector<double> estimated_track(const Signal& x, const Options& opt,
                                    const WaveletParams& params, const ScaleGrid& grid,
                                    SigmaTrack* track_out) {
    const SigmaGrid sigmas = SigmaGrid::make(opt.sigma_hi, opt.sigma_lo, opt.sigma_step, params);
    const std::vector<double> weights(static_cast<std::size_t>(opt.smooth_len),
                                      1.0 / opt.smooth_len);
    SigmaTrack track = estimate_sigma(x, sigmas, grid, opt.zeta, opt.ell, opt.gamma3, weights,
                                      params);
    if (track_out != nullptr) *track_out = track;
    return track.smoothed;
}

struct Planes {
    TimeScalePlane w, w_db, w_g1, w_g2;
};

Planes compute_planes(const Signal& x, const std::vector<double>& track,
                      const WaveletParams& params, const ScaleGrid& grid, double sigma_step) {
    Planes p;
    p.w = adaptive_cwt(x, track, params, grid, Kernel::G, sigma_step);
    p.w_db = adaptive_cwt(x, track, params, grid, Kernel::Db, sigma_step);
    p.w_g1 = adaptive_cwt(x, track, params, grid, Kernel::G1, sigma_step);
    p.w_g2 = adaptive_cwt(x, track, params, grid, Kernel::G2, sigma_step);
    return p;
}

void write_plane_outputs(const fs::path& dir, const std::string& stem,
                         const TimeScalePlane& plane, const Metadata& meta) {
    std::ofstream csv(dir / (stem + ".csv"));
    write_plane_csv(csv, plane, meta);
    write_heatmap_png((dir / (stem + ".png")).string(), plane.data.cwiseAbs());
}

void write_plane_outputs(const fs::path& dir, const std::string& stem, const TimeFreqPlane& plane,
                         const Metadata& meta) {
    std::ofstream csv(dir / (stem + ".csv"));
    write_plane_csv(csv, plane, meta);
    write_heatmap_png((dir / (stem + ".png")).string(), plane.data.cwiseAbs());
}

int cmd_transform(const Options& opt) {
    const WaveletParams params = WaveletParams::make(opt.mu, opt.tau0);
    const Signal x = build_signal(opt);
    const ScaleGrid grid = make_scale_grid(x.size(), opt.voices, x.dt());
    const fs::path dir = opt.out_dir;
    fs::create_directories(dir);

    Metadata meta = base_metadata(opt, "transform");
    std::vector<double> track;
    if (opt.estimate) {
        track = estimated_track(x, opt, params, grid, nullptr);
        meta.emplace_back("sigma", "estimated");
    } else {
        track.assign(x.size(), opt.sigma);
        meta.emplace_back("sigma", format_number(opt.sigma));
    }

    const Planes p = compute_planes(x, track, params, grid, opt.estimate ? opt.sigma_step : 0.0);
    const auto bins = static_cast<Eigen::Index>(x.size() / 2);

    const PhasePlane phase1 = phase_adaptive(p.w, p.w_db, p.w_g2, track, opt.gamma_rel);
    const PhasePlane phase2 =
        phase_adaptive_2nd(p.w, p.w_db, p.w_g1, p.w_g2, track, opt.gamma_rel);
    const TimeFreqPlane sst1 = squeeze(p.w, phase1, bins);
    const TimeFreqPlane sst2 = squeeze(p.w, phase2, bins);

    write_plane_outputs(dir, "cwt", p.w, meta);
    write_plane_outputs(dir, "sst1", sst1, meta);
    write_plane_outputs(dir, "sst2", sst2, meta);
    std::cout << "wrote " << (dir / "cwt.csv") << ", sst1/sst2 CSV and PNG files\n";
    return 0;
}

int cmd_estimate(const Options& opt) {
    const WaveletParams params = WaveletParams::make(opt.mu, opt.tau0);
    const Signal x = build_signal(opt);
    const ScaleGrid grid = make_scale_grid(x.size(), opt.voices, x.dt());
    const fs::path dir = opt.out_dir;
    fs::create_directories(dir);

    SigmaTrack track;
    estimated_track(x, opt, params, grid, &track);

    std::vector<double> times(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) times[k] = x.time_at(k);

    std::vector<std::pair<std::string, std::vector<double>>> extra;
    if (!opt.laws.empty()) {
        const std::vector<IfLaw> laws = parse_laws(opt.laws);
        std::vector<double> s1(times.size()), s2(times.size());
        std::vector<std::optional<double>> s2_opt(times.size());
        std::vector<std::vector<double>> margins(times.size());
        for (std::size_t k = 0; k < times.size(); ++k) {
            s1[k] = sigma1(laws, times[k], params);
            const Sigma2Result r = sigma2(laws, times[k], params);
            s2_opt[k] = r.sigma;
            s2[k] = r.sigma.value_or(std::numeric_limits<double>::quiet_NaN());
            if (r.sigma) {
                margins[k] = check_separated(laws, *r.sigma, times[k], params).margins;
            }
        }
        extra.emplace_back("sigma1", s1);
        extra.emplace_back("sigma2", s2);
        std::ofstream sep(dir / "separability.csv");
        write_separability_csv(sep, times, s1, s2_opt, margins,
                               base_metadata(opt, "estimate"));
    }
    if (opt.renyi_sst) {
        const SigmaGrid sigmas = SigmaGrid::make(opt.sigma_hi, opt.sigma_lo, opt.sigma_step,
                                                 params);
        extra.emplace_back("sigma_re", sigma_renyi_sst(x, sigmas, grid, opt.zeta, opt.ell,
                                                       SstOrder::First, params));
        extra.emplace_back("sigma_re2", sigma_renyi_sst(x, sigmas, grid, opt.zeta, opt.ell,
                                                        SstOrder::Second, params));
    }

    std::ofstream out(dir / "sigma_track.csv");
    write_sigma_track_csv(out, times, track, extra, base_metadata(opt, "estimate"));
    std::cout << "wrote " << (dir / "sigma_track.csv") << "\n";
    return 0;
}

int cmd_separate(const Options& opt) {
    const WaveletParams params = WaveletParams::make(opt.mu, opt.tau0);
    const Signal x = build_signal(opt);
    const ScaleGrid grid = make_scale_grid(x.size(), opt.voices, x.dt());
    const fs::path dir = opt.out_dir;
    fs::create_directories(dir);

    Metadata meta = base_metadata(opt, "separate");
    meta.emplace_back("components", std::to_string(opt.components));
    meta.emplace_back("band", std::to_string(opt.band));

    SigmaTrack track;
    const std::vector<double> sigma_est = estimated_track(x, opt, params, grid, &track);

    const Planes p = compute_planes(x, sigma_est, params, grid, opt.sigma_step);
    const PhasePlane phase2 =
        phase_adaptive_2nd(p.w, p.w_db, p.w_g1, p.w_g2, sigma_est, opt.gamma_rel);
    const TimeFreqPlane sst2 = squeeze(p.w, phase2, static_cast<Eigen::Index>(x.size() / 2));

    const RidgeSet ridges = extract_ridges(sst2, opt.components, opt.band, opt.jump);
    if (!ridges.complete) {
        std::cerr << "warning: found only " << ridges.bins.size() << " of " << opt.components
                  << " requested ridges\n";
    }

    std::vector<double> times(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) times[k] = x.time_at(k);
    std::ofstream track_csv(dir / "sigma_track.csv");
    write_sigma_track_csv(track_csv, times, track, {}, meta);

    std::vector<Signal> truth;
    if (opt.signal == "two-chirps" && !opt.add_noise_flag) {
        truth = two_chirps_components(opt.n);
    } else if (opt.signal == "three-component" && !opt.add_noise_flag) {
        truth = three_component_components(opt.n);
    }

    std::ostringstream report;
    for (std::size_t k = 0; k < ridges.bins.size(); ++k) {
        const Component comp = recover_component(sst2, ridges.bins[k],
                                                 static_cast<Eigen::Index>(opt.band), params);
        std::ofstream out(dir / ("component_" + std::to_string(k + 1) + ".csv"));
        write_component_csv(out, comp.signal, comp.ridge_freq, meta);
        report << "component " << (k + 1) << ": mean ridge "
               << format_number(
                      std::accumulate(comp.ridge_freq.begin(), comp.ridge_freq.end(), 0.0) /
                      static_cast<double>(comp.ridge_freq.size()))
               << " Hz";
        if (!truth.empty()) {
            // components come out highest frequency first; ground truth is
            // listed lowest first
            const std::size_t idx = truth.size() >= k + 1 ? truth.size() - 1 - k : 0;
            if (idx < truth.size()) {
                report << ", rmse vs generator component " << (idx + 1) << " = "
                       << format_number(
                              relative_rmse(truth[idx], comp.signal, x.t0 + 0.1 * x.duration(),
                                            x.t0 + 0.9 * x.duration()));
            }
        }
        report << "\n";
    }
    std::ofstream rep(dir / "report.txt");
    rep << report.str();
    std::cout << report.str();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adaptive synchrosqueezing with a time-varying window width"};
    app.require_subcommand(1);
    Options opt;

    CLI::App* transform = app.add_subcommand("transform", "write CWT and SST planes");
    add_common(transform, opt);
    transform->add_option("--sigma", opt.sigma, "constant window width");
    transform->add_flag("--estimate-sigma", opt.estimate, "use the blind width estimate");

    CLI::App* estimate = app.add_subcommand("estimate", "write the sigma track");
    add_common(estimate, opt);
    estimate->add_option("--laws", opt.laws, "ground-truth LFM laws \"c1,r1;c2,r2\"");
    estimate->add_flag("--renyi-sst", opt.renyi_sst, "also emit entropy-minimizing SST widths");

    CLI::App* separate = app.add_subcommand("separate", "estimate, squeeze and recover components");
    add_common(separate, opt);
    separate->add_option("--components", opt.components, "number of components to extract");
    separate->add_option("--band", opt.band, "integration half-width in bins");
    separate->add_option("--jump", opt.jump, "ridge linking jump limit in bins");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    for (auto* cmd : {transform, estimate, separate}) {
        if (cmd->parsed()) {
            opt.add_noise_flag = cmd->count("--snr") > 0;
        }
    }

    try {
        if (transform->parsed()) return cmd_transform(opt);
        if (estimate->parsed()) return cmd_estimate(opt);
        if (separate->parsed()) return cmd_separate(opt);
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
