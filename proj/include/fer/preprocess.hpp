#ifndef FER_PREPROCESS_HPP
#define FER_PREPROCESS_HPP

#include "fer/image.hpp"

#include <array>
#include <cstdint>

namespace fer {

struct ClaheParams {
    int tiles_x = 8;
    int tiles_y = 8;
    /// Relative clip factor; a bin may hold at most clip_limit * tile_pixels / 256 counts.
    /// Use +infinity to disable clipping.
    double clip_limit = 2.0;

    void validate() const;
};

using Histogram = std::array<std::uint32_t, 256>;

/// Absolute per-bin limit for a tile of `tile_pixels` pixels: ceil(clip_limit * tile_pixels / 256),
/// never below 1. Returns tile_pixels when clipping is disabled.
std::uint32_t clip_ceiling(double clip_limit, std::uint32_t tile_pixels);

/// Clips every bin at clip_ceiling() and spreads the excess in one uniform
/// pass: every bin receives excess / 256 without rising above the ceiling,
/// and what is left goes one count at a time to evenly spaced bins still
/// below it. No bin ends above the ceiling. Returns the clipped excess.
std::uint32_t clip_histogram(Histogram& hist, double clip_limit, std::uint32_t tile_pixels);

/// Transfer function of one tile given its raw histogram. Tiles holding a
/// single intensity map identically; otherwise the clipped CDF is stretched
/// so the first occupied bin lands on 0 and the full count on 255.
std::array<std::uint8_t, 256> tile_mapping(const Histogram& raw, double clip_limit);

/// Contrast-limited adaptive histogram equalization with bilinear
/// interpolation between the four nearest tile mappings.
GrayImage clahe(const GrayImage& image, const ClaheParams& params = {});

}  // namespace fer

#endif  // FER_PREPROCESS_HPP
