#ifndef FER_LOCALIZE_HPP
#define FER_LOCALIZE_HPP

#include "fer/image.hpp"
#include "fer/preprocess.hpp"

#include <optional>
#include <vector>

namespace fer {

enum class Polarity { dark, light };

struct LocalizeParams {
    /// Fixed binarization level; Otsu when empty.
    std::optional<int> threshold;
    Polarity polarity = Polarity::dark;
    int se_radius = 3;
    double resize_scale = 2.0;
    /// Use regional maxima of the (polarity-adjusted) enhanced image as an
    /// extra marker source for reconstruction.
    bool regional_max_marker = false;
    ClaheParams clahe;

    void validate() const;
};

/// Level maximizing between-class variance, class 0 being intensities <= level.
/// Ties resolve to the lowest level; an image with a single intensity returns it.
int otsu_threshold(const GrayImage& image);

/// Foreground mask for `level`: dark polarity keeps v <= level, light keeps v > level.
BinaryMask binarize(const GrayImage& image, int level, Polarity polarity);

/// Bounding box of the face region. Throws NoFaceFound when no foreground survives.
BBox localize_face(const GrayImage& image, const LocalizeParams& params = {});

/// Crop then bilinear resize to (round(w * scale), round(h * scale)).
GrayImage crop_and_enlarge(const GrayImage& image, const BBox& box, double scale);

}  // namespace fer

#endif  // FER_LOCALIZE_HPP
