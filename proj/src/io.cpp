#include "tvsst/io.hpp"

#include <zlib.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace tvsst {

namespace {

void write_meta(std::ostream& out, const Metadata& meta) {
    for (const auto& [key, value] : meta) out << "# " << key << "=" << value << "\n";
}

std::vector<double> plane_times(double t0, double sample_rate, Eigen::Index n) {
    std::vector<double> t(static_cast<std::size_t>(n));
    for (Eigen::Index k = 0; k < n; ++k) {
        t[static_cast<std::size_t>(k)] = t0 + static_cast<double>(k) / sample_rate;
    }
    return t;
}

void write_complex_rows(std::ostream& out, const Eigen::MatrixXcd& data,
                        const std::vector<double>& axis, const std::vector<double>& times,
                        const char* axis_label) {
    out << axis_label;
    for (double t : times) out << "," << format_number(t);
    out << "\n";
    for (Eigen::Index j = 0; j < data.rows(); ++j) {
        out << format_number(axis[static_cast<std::size_t>(j)]);
        for (Eigen::Index n = 0; n < data.cols(); ++n) out << "," << format_complex(data(j, n));
        out << "\n";
    }
}

}  // namespace

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string format_complex(const std::complex<double>& v) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%.17g%s%.17gi", v.real(), v.imag() < 0.0 ? "-" : "+",
                  std::abs(v.imag()));
    return buf;
}

void write_plane_csv(std::ostream& out, const TimeScalePlane& plane, const Metadata& meta) {
    write_meta(out, meta);
    const std::vector<double> times = plane_times(plane.t0, plane.sample_rate, plane.n_times());
    write_complex_rows(out, plane.data, plane.grid.scales, times, "scale");
}

void write_plane_csv(std::ostream& out, const TimeFreqPlane& plane, const Metadata& meta) {
    write_meta(out, meta);
    const std::vector<double> times = plane_times(plane.t0, plane.sample_rate, plane.n_times());
    std::vector<double> freqs(static_cast<std::size_t>(plane.n_bins()));
    for (Eigen::Index k = 0; k < plane.n_bins(); ++k) {
        freqs[static_cast<std::size_t>(k)] = plane.bin_freq(k);
    }
    write_complex_rows(out, plane.data, freqs, times, "frequency");
}

void write_sigma_track_csv(std::ostream& out, const std::vector<double>& times,
                           const SigmaTrack& track,
                           const std::vector<std::pair<std::string, std::vector<double>>>& extra,
                           const Metadata& meta) {
    write_meta(out, meta);
    out << "t,sigma_u,C,sigma_est";
    for (const auto& [name, _] : extra) out << "," << name;
    out << "\n";
    for (std::size_t n = 0; n < times.size(); ++n) {
        out << format_number(times[n]) << "," << format_number(track.sigma_u[n]) << ","
            << format_number(track.raw[n]) << "," << format_number(track.smoothed[n]);
        for (const auto& [_, column] : extra) out << "," << format_number(column[n]);
        out << "\n";
    }
}

void write_component_csv(std::ostream& out, const Signal& component,
                         const std::vector<double>& ridge_freq, const Metadata& meta) {
    write_meta(out, meta);
    out << "t,real,imag,ridge_Hz\n";
    for (std::size_t n = 0; n < component.size(); ++n) {
        out << format_number(component.time_at(n)) << ","
            << format_number(component.samples[n].real()) << ","
            << format_number(component.samples[n].imag()) << "," << format_number(ridge_freq[n])
            << "\n";
    }
}

void write_separability_csv(std::ostream& out, const std::vector<double>& times,
                            const std::vector<double>& sigma1_track,
                            const std::vector<std::optional<double>>& sigma2_track,
                            const std::vector<std::vector<double>>& margins, const Metadata& meta) {
    write_meta(out, meta);
    std::size_t n_pairs = margins.empty() ? 0 : margins.front().size();
    out << "b,sigma1,sigma2";
    for (std::size_t k = 0; k < n_pairs; ++k) out << ",margin_" << (k + 1);
    out << "\n";
    for (std::size_t n = 0; n < times.size(); ++n) {
        out << format_number(times[n]) << "," << format_number(sigma1_track[n]) << ",";
        if (sigma2_track[n]) out << format_number(*sigma2_track[n]);
        for (double m : margins[n]) out << "," << format_number(m);
        out << "\n";
    }
}

void write_heatmap_png(const std::string& path, const Eigen::MatrixXd& values) {
    const auto rows = static_cast<std::size_t>(values.rows());
    const auto cols = static_cast<std::size_t>(values.cols());
    if (rows == 0 || cols == 0) throw std::invalid_argument("write_heatmap_png: empty matrix");
    const double max = values.maxCoeff();
    const double scale = max > 0.0 ? 255.0 / max : 0.0;

    // one filter byte (0) per scanline; row 0 of the matrix at the bottom
    std::vector<unsigned char> raw((cols + 1) * rows);
    for (std::size_t y = 0; y < rows; ++y) {
        unsigned char* line = raw.data() + y * (cols + 1);
        line[0] = 0;
        const auto j = static_cast<Eigen::Index>(rows - 1 - y);
        for (std::size_t x = 0; x < cols; ++x) {
            double v = values(j, static_cast<Eigen::Index>(x)) * scale;
            line[1 + x] = static_cast<unsigned char>(std::clamp(v, 0.0, 255.0));
        }
    }

    uLongf bound = compressBound(static_cast<uLong>(raw.size()));
    std::vector<unsigned char> compressed(bound);
    if (compress2(compressed.data(), &bound, raw.data(), static_cast<uLong>(raw.size()), 6) !=
        Z_OK) {
        throw std::runtime_error("write_heatmap_png: deflate failed");
    }
    compressed.resize(bound);

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_heatmap_png: cannot open " + path);

    auto put32 = [&out](std::uint32_t v) {
        unsigned char b[4] = {static_cast<unsigned char>(v >> 24),
                              static_cast<unsigned char>(v >> 16),
                              static_cast<unsigned char>(v >> 8), static_cast<unsigned char>(v)};
        out.write(reinterpret_cast<char*>(b), 4);
    };
    auto chunk = [&](const char* type, const unsigned char* data, std::size_t len) {
        put32(static_cast<std::uint32_t>(len));
        out.write(type, 4);
        if (len > 0) out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(len));
        uLong crc = crc32(0L, Z_NULL, 0);
        crc = crc32(crc, reinterpret_cast<const Bytef*>(type), 4);
        if (len > 0) crc = crc32(crc, data, static_cast<uInt>(len));
        put32(static_cast<std::uint32_t>(crc));
    };

    static const unsigned char magic[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
    out.write(reinterpret_cast<const char*>(magic), 8);

    unsigned char ihdr[13];
    auto put_be = [](unsigned char* p, std::uint32_t v) {
        p[0] = static_cast<unsigned char>(v >> 24);
        p[1] = static_cast<unsigned char>(v >> 16);
        p[2] = static_cast<unsigned char>(v >> 8);
        p[3] = static_cast<unsigned char>(v);
    };
    put_be(ihdr, static_cast<std::uint32_t>(cols));
    put_be(ihdr + 4, static_cast<std::uint32_t>(rows));
    ihdr[8] = 8;   // bit depth
    ihdr[9] = 0;   // grayscale
    ihdr[10] = 0;  // deflate
    ihdr[11] = 0;  // filter method
    ihdr[12] = 0;  // no interlace
    chunk("IHDR", ihdr, sizeof(ihdr));
    chunk("IDAT", compressed.data(), compressed.size());
    chunk("IEND", nullptr, 0);
}

}  // namespace tvsst
