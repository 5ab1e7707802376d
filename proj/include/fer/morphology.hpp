#ifndef FER_MORPHOLOGY_HPP
#define FER_MORPHOLOGY_HPP

#include "fer/image.hpp"

#include <vector>

namespace fer {

/// Set of (dx, dy) displacements. Disk elements are symmetric under negation.
struct StructuringElement {
    std::vector<Point> offsets;
};

/// All offsets with dx^2 + dy^2 <= radius^2. Radius may be fractional.
StructuringElement disk_se(double radius);

/// The 3x3 square, i.e. the elementary 8-neighbour step used by reconstruction.
StructuringElement square_se();

/// out(p) = OR_{s in se} in(p - s); pixels outside the raster read false.
BinaryMask dilate(const BinaryMask& mask, const StructuringElement& se);

/// out(p) = AND_{s in se} in(p + s); pixels outside the raster read false.
BinaryMask erode(const BinaryMask& mask, const StructuringElement& se);

BinaryMask complement(const BinaryMask& mask);
BinaryMask intersect(const BinaryMask& a, const BinaryMask& b);
BinaryMask subtract(const BinaryMask& a, const BinaryMask& b);

/// Reconstruction by dilation: the 8-connected components of `mask` touched
/// by `marker`. The marker is intersected with the mask first.
BinaryMask reconstruct(const BinaryMask& marker, const BinaryMask& mask);

/// Grayscale reconstruction by dilation of `marker` under `mask`
/// (pointwise min of 8-neighbour dilation and mask, iterated to fixpoint).
/// Requires marker <= mask pointwise; values are signed so marker may go below 0.
std::vector<int> reconstruct_gray(std::vector<int> marker, const std::vector<int>& mask, int width, int height);

/// True on 8-connected plateaus with no strictly brighter 8-neighbour.
BinaryMask regional_maxima(const GrayImage& image);

/// Removes every 8-connected component touching the raster border.
BinaryMask clear_border(const BinaryMask& mask);

}  // namespace fer

#endif  // FER_MORPHOLOGY_HPP
