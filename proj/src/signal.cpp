#include "tvsst/signal.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace tvsst {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_length(std::size_t n) {
    if (n < 2) throw std::invalid_argument("signal generator: need at least 2 samples");
}

Signal sample_real_on_unit_interval(std::size_t n, const std::function<double(double)>& f) {
    check_length(n);
    Signal s;
    s.sample_rate = static_cast<double>(n);
    s.is_real = true;
    s.samples.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        s.samples.emplace_back(f(static_cast<double>(k) / static_cast<double>(n)), 0.0);
    }
    return s;
}

double parse_double(const std::string& text, std::size_t line_no) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &pos);
    } catch (const std::exception&) {
        throw std::runtime_error("load_csv: parse failure at line " + std::to_string(line_no));
    }
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos != text.size()) {
        throw std::runtime_error("load_csv: trailing characters at line " + std::to_string(line_no));
    }
    return v;
}

}  // namespace

Signal make_signal(std::vector<std::complex<double>> samples, double sample_rate, double t0) {
    if (samples.size() < 2) throw std::invalid_argument("Signal: length must be >= 2");
    if (!(sample_rate > 0.0)) throw std::invalid_argument("Signal: sample_rate must be positive");
    Signal s;
    s.samples = std::move(samples);
    s.sample_rate = sample_rate;
    s.t0 = t0;
    s.is_real = true;
    for (const auto& v : s.samples) {
        if (v.imag() != 0.0) {
            s.is_real = false;
            break;
        }
    }
    return s;
}

Signal make_real_signal(const std::vector<double>& samples, double sample_rate, double t0) {
    std::vector<std::complex<double>> c(samples.begin(), samples.end());
    return make_signal(std::move(c), sample_rate, t0);
}

std::complex<double> LfmComponent::eval(double t) const {
    double a = amplitude * std::exp(p * t + 0.5 * q * t * t);
    double phase = kTwoPi * (c * t + 0.5 * r * t * t);
    return std::polar(a, phase);
}

IfLaw lfm_law(double c, double r) {
    return IfLaw{[c, r](double t) { return c + r * t; }, [r](double) { return r; }};
}

Signal gen_two_chirps(std::size_t n_samples) {
    return sample_real_on_unit_interval(n_samples, [](double t) {
        return std::cos(kTwoPi * (12.0 * t + 25.0 * t * t)) +
               std::cos(kTwoPi * (34.0 * t + 32.0 * t * t));
    });
}

std::vector<Signal> two_chirps_components(std::size_t n_samples) {
    std::vector<Signal> out;
    out.push_back(sample_real_on_unit_interval(
        n_samples, [](double t) { return std::cos(kTwoPi * (12.0 * t + 25.0 * t * t)); }));
    out.push_back(sample_real_on_unit_interval(
        n_samples, [](double t) { return std::cos(kTwoPi * (34.0 * t + 32.0 * t * t)); }));
    return out;
}

std::vector<IfLaw> two_chirps_laws() { return {lfm_law(12.0, 50.0), lfm_law(34.0, 64.0)}; }

Signal gen_three_component(std::size_t n_samples) {
    return sample_real_on_unit_interval(n_samples, [](double t) {
        return std::cos(16.0 * kPi * t) + std::cos(96.0 * kPi * t + 30.0 * std::cos(4.0 * kPi * t)) +
               std::cos(180.0 * kPi * t + 30.0 * std::cos(4.0 * kPi * t));
    });
}

std::vector<Signal> three_component_components(std::size_t n_samples) {
    std::vector<Signal> out;
    out.push_back(sample_real_on_unit_interval(
        n_samples, [](double t) { return std::cos(16.0 * kPi * t); }));
    out.push_back(sample_real_on_unit_interval(n_samples, [](double t) {
        return std::cos(96.0 * kPi * t + 30.0 * std::cos(4.0 * kPi * t));
    }));
    out.push_back(sample_real_on_unit_interval(n_samples, [](double t) {
        return std::cos(180.0 * kPi * t + 30.0 * std::cos(4.0 * kPi * t));
    }));
    return out;
}

std::vector<IfLaw> three_component_laws() {
    std::vector<IfLaw> laws;
    laws.push_back(IfLaw{[](double) { return 8.0; }, [](double) { return 0.0; }});
    laws.push_back(IfLaw{[](double t) { return 48.0 - 60.0 * std::sin(4.0 * kPi * t); },
                         [](double t) { return -240.0 * kPi * std::cos(4.0 * kPi * t); }});
    laws.push_back(IfLaw{[](double t) { return 90.0 - 60.0 * std::sin(4.0 * kPi * t); },
                         [](double t) { return -240.0 * kPi * std::cos(4.0 * kPi * t); }});
    return laws;
}

Signal gen_tone(std::size_t n_samples, double freq, double amplitude, bool analytic) {
    check_length(n_samples);
    Signal s;
    s.sample_rate = static_cast<double>(n_samples);
    s.is_real = !analytic;
    s.samples.reserve(n_samples);
    for (std::size_t k = 0; k < n_samples; ++k) {
        double t = static_cast<double>(k) / static_cast<double>(n_samples);
        if (analytic) {
            s.samples.push_back(std::polar(amplitude, kTwoPi * freq * t));
        } else {
            s.samples.emplace_back(amplitude * std::cos(kTwoPi * freq * t), 0.0);
        }
    }
    return s;
}

Signal gen_lfm(std::size_t n_samples, const LfmComponent& comp) {
    check_length(n_samples);
    Signal s;
    s.sample_rate = static_cast<double>(n_samples);
    s.is_real = false;
    s.samples.reserve(n_samples);
    for (std::size_t k = 0; k < n_samples; ++k) {
        s.samples.push_back(comp.eval(static_cast<double>(k) / static_cast<double>(n_samples)));
    }
    return s;
}

Signal add_noise(const Signal& x, double snr_db, std::uint64_t seed) {
    if (x.size() == 0) throw std::invalid_argument("add_noise: empty signal");
    if (!std::isfinite(snr_db)) throw std::invalid_argument("add_noise: snr_db must be finite");

    double power = 0.0;
    for (const auto& v : x.samples) power += std::norm(v);
    power /= static_cast<double>(x.size());
    double noise_power = power / std::pow(10.0, snr_db / 10.0);

    std::mt19937_64 rng(seed);
    auto uniform = [&rng]() {
        return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
    };
    double spare = 0.0;
    bool has_spare = false;
    auto gauss = [&]() {
        if (has_spare) {
            has_spare = false;
            return spare;
        }
        double u1 = uniform();
        double u2 = uniform();
        double mag = std::sqrt(-2.0 * std::log(u1));
        spare = mag * std::sin(kTwoPi * u2);
        has_spare = true;
        return mag * std::cos(kTwoPi * u2);
    };

    Signal out = x;
    if (x.is_real) {
        double scale = std::sqrt(noise_power);
        for (auto& v : out.samples) v += std::complex<double>(scale * gauss(), 0.0);
    } else {
        double scale = std::sqrt(noise_power / 2.0);
        for (auto& v : out.samples) v += std::complex<double>(scale * gauss(), scale * gauss());
        out.is_real = false;
    }
    return out;
}

Signal load_csv(const std::string& path, std::optional<double> sample_rate_override) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_csv: cannot open " + path);

    std::optional<double> header_rate;
    std::vector<std::complex<double>> samples;
    bool complex_seen = false;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string trimmed = line;
        std::size_t start = trimmed.find_first_not_of(" \t");
        if (start == std::string::npos) continue;
        trimmed = trimmed.substr(start);
        if (trimmed[0] == '#') {
            auto pos = trimmed.find("sample_rate=");
            if (pos != std::string::npos) {
                header_rate = parse_double(trimmed.substr(pos + 12), line_no);
            }
            continue;
        }
        auto comma = trimmed.find(',');
        if (comma == std::string::npos) {
            samples.emplace_back(parse_double(trimmed, line_no), 0.0);
        } else {
            double re = parse_double(trimmed.substr(0, comma), line_no);
            double im = parse_double(trimmed.substr(comma + 1), line_no);
            samples.emplace_back(re, im);
            complex_seen = true;
        }
    }
    if (samples.size() < 2) throw std::runtime_error("load_csv: fewer than 2 samples in " + path);

    double rate = 0.0;
    if (sample_rate_override) {
        rate = *sample_rate_override;
    } else if (header_rate) {
        rate = *header_rate;
    } else {
        throw std::runtime_error("load_csv: no sample rate (header or override) for " + path);
    }
    Signal s = make_signal(std::move(samples), rate);
    if (complex_seen) s.is_real = false;
    return s;
}

}  // namespace tvsst
