#ifndef FER_SYNTHETIC_HPP
#define FER_SYNTHETIC_HPP

#include "fer/image.hpp"
#include "fer/mlp.hpp"

#include <array>
#include <cstdint>

namespace fer {

/// Schematic frontal face: a light background, a mid-gray oval and six dark
/// elliptical blobs whose geometry follows a per-expression archetype.
struct SyntheticOptions {
    int width = 256;
    int height = 256;
    std::uint8_t background = 235;
    std::uint8_t skin = 160;
    std::uint8_t feature = 40;
    /// Per-pixel noise amplitude (uniform in [-noise, noise]).
    int noise = 3;
    /// Scales the per-face random perturbation of every archetype parameter.
    double jitter = 1.0;
};

struct SyntheticFace {
    GrayImage image;
    Expression label;
    BBox face;
    /// Painted pixel extents, ordered left eyebrow, left eye, right eyebrow,
    /// right eye, nose, mouth.
    std::array<BBox, 6> features;
};

/// Deterministic in (label, seed, options). `offset` translates the whole
/// face without changing any random draw.
SyntheticFace generate_face(Expression label, std::uint64_t seed, const SyntheticOptions& options = {},
                            Point offset = {0, 0});

}  // namespace fer

#endif  // FER_SYNTHETIC_HPP
