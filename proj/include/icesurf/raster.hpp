#pragma once
/**
 * Plot-ready raster exports in binary PPM (P6).
 *
 *   <prefix>_slice_NNNN.ppm  one per slice: intensity in grey (columns across,
 *                            rows down), air surface green, bottom surface red,
 *                            bin bound blue
 *   <prefix>_depth.ppm       l x phi depth map of the surface, colour = row
 */

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "icesurf/core.hpp"

namespace icesurf {

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;
    bool operator==(const Rgb&) const = default;
};

class RgbImage {
public:
    RgbImage(int width, int height) : width_(width), height_(height), pixels_(static_cast<std::size_t>(width) * height) {}

    int width() const { return width_; }
    int height() const { return height_; }
    Rgb& at(int x, int y) { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }
    const Rgb& at(int x, int y) const { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }

    /// Nearest-neighbour upscale by integer factors.
    RgbImage scaled(int sx, int sy) const;
    std::string to_ppm() const;

private:
    int width_;
    int height_;
    std::vector<Rgb> pixels_;
};

/// Perceptually ordered colour for t in [0, 1] (dark blue -> yellow).
Rgb depth_colour(double t);

RgbImage render_slice(const TopoSequence& seq, const Surface& surface, int i);
RgbImage render_depth(const Surface& surface);

/// Writes every image atomically and returns the written paths in order.
std::vector<std::filesystem::path> export_plots(const TopoSequence& seq, const Surface& surface,
                                                const std::string& prefix, int scale = 4);

}  // namespace icesurf
