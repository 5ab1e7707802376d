#ifndef FER_SUSAN_HPP
#define FER_SUSAN_HPP

#include "fer/image.hpp"
#include "fer/morphology.hpp"

#include <vector>

namespace fer {

struct SusanParams {
    double brightness_t = 27.0;       ///< similarity threshold t, intensity units
    double geometric_fraction = 0.75; ///< g = fraction * n_max
    double mask_radius = 3.4;         ///< 3.4 gives the 37-pixel circular mask
    bool hard_similarity = false;     ///< |dI| <= t comparator instead of exp(-(dI/t)^6)

    void validate() const;
};

struct EdgeStrengthImage {
    int width = 0;
    int height = 0;
    double g = 0;  ///< geometric threshold of a full interior mask
    std::vector<double> strength;

    double at(int x, int y) const { return strength[static_cast<std::size_t>(y) * width + x]; }
};

/// Similarity weight of a mask pixel whose brightness differs from the nucleus by `diff`.
double susan_similarity(double diff, const SusanParams& params);

/// Weighted count of mask pixels similar to the nucleus at `center`,
/// excluding the nucleus; the mask is clipped at the image border.
double usan_area(const GrayImage& image, Point center, const SusanParams& params);

/// R = g - n where n < g, else 0. Border pixels scale g to their clipped mask.
EdgeStrengthImage susan_edge_strength(const GrayImage& image, const SusanParams& params = {});

/// strength > threshold, optionally followed by one 3x3 binary median pass.
BinaryMask edge_mask(const EdgeStrengthImage& strength, double threshold, bool despeckle = true);

/// 3x3 majority filter; pixels outside the raster count as false.
BinaryMask median3x3(const BinaryMask& mask);

}  // namespace fer

#endif  // FER_SUSAN_HPP
