#include "icesurf/raster.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

#include "icesurf/dataio.hpp"

namespace icesurf {

RgbImage RgbImage::scaled(int sx, int sy) const {
    RgbImage out(width_ * sx, height_ * sy);
    for (int y = 0; y < out.height(); ++y) {
        for (int x = 0; x < out.width(); ++x) out.at(x, y) = at(x / sx, y / sy);
    }
    return out;
}

std::string RgbImage::to_ppm() const {
    std::string out = "P6\n" + std::to_string(width_) + " " + std::to_string(height_) + "\n255\n";
    out.reserve(out.size() + pixels_.size() * 3);
    for (const auto& p : pixels_) {
        out.push_back(static_cast<char>(p.r));
        out.push_back(static_cast<char>(p.g));
        out.push_back(static_cast<char>(p.b));
    }
    return out;
}

Rgb depth_colour(double t) {
    static constexpr std::array<std::array<double, 3>, 5> stops{{
        {68, 1, 84},
        {59, 82, 139},
        {33, 145, 140},
        {94, 201, 98},
        {253, 231, 37},
    }};
    t = std::clamp(std::isfinite(t) ? t : 0.0, 0.0, 1.0);
    const double pos = t * (stops.size() - 1);
    const std::size_t k = std::min(static_cast<std::size_t>(pos), stops.size() - 2);
    const double f = pos - static_cast<double>(k);
    auto mix = [&](int c) {
        return static_cast<std::uint8_t>(std::lround(stops[k][c] + f * (stops[k + 1][c] - stops[k][c])));
    };
    return {mix(0), mix(1), mix(2)};
}

RgbImage render_slice(const TopoSequence& seq, const Surface& surface, int i) {
    const auto data = seq.intensity_data();
    const auto [lo_it, hi_it] = std::minmax_element(data.begin(), data.end());
    const double lo = lo_it == data.end() ? 0.0 : *lo_it;
    const double span = hi_it == data.end() || *hi_it <= lo ? 1.0 : *hi_it - lo;

    RgbImage img(seq.phi(), seq.rho());
    for (int j = 0; j < seq.phi(); ++j) {
        for (int r = 0; r < seq.rho(); ++r) {
            const auto v = static_cast<std::uint8_t>(std::lround(255.0 * (seq.intensity(i, j, r) - lo) / span));
            img.at(j, r) = {v, v, v};
        }
        img.at(j, seq.air(i, j)) = {0, 200, 0};
        img.at(j, surface.at(i, j)) = {230, 20, 20};
    }
    if (const auto& bin = seq.bin(i)) img.at(bin->column, bin->bound) = {40, 80, 255};
    return img;
}

RgbImage render_depth(const Surface& surface) {
    const auto labels = surface.labels();
    RgbImage img(surface.phi(), surface.l());
    if (labels.empty()) return img;
    const auto [lo, hi] = std::minmax_element(labels.begin(), labels.end());
    const double span = *hi > *lo ? static_cast<double>(*hi - *lo) : 1.0;
    for (int i = 0; i < surface.l(); ++i) {
        for (int j = 0; j < surface.phi(); ++j) img.at(j, i) = depth_colour((surface.at(i, j) - *lo) / span);
    }
    return img;
}

std::vector<std::filesystem::path> export_plots(const TopoSequence& seq, const Surface& surface,
                                                const std::string& prefix, int scale) {
    if (surface.l() != seq.l() || surface.phi() != seq.phi()) throw DimMismatch("surface does not match the sequence");
    for (Label s : surface.labels()) {
        if (s < 0 || s >= seq.rho()) throw InvalidArgument("surface label out of range");
    }
    if (auto v = validate_sequence(seq); !v.empty()) throw InvalidArgument("invalid sequence: " + v.front().message());
    scale = std::max(scale, 1);
    std::vector<std::filesystem::path> written;
    for (int i = 0; i < seq.l(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "_slice_%04d.ppm", i);
        const std::filesystem::path path = prefix + name;
        io::write_file_atomic(path, render_slice(seq, surface, i).scaled(scale, 1).to_ppm());
        written.push_back(path);
    }
    const std::filesystem::path depth = prefix + "_depth.ppm";
    io::write_file_atomic(depth, render_depth(surface).scaled(scale, scale).to_ppm());
    written.push_back(depth);
    return written;
}

}  // namespace icesurf
