#ifndef FER_PIPELINE_HPP
#define FER_PIPELINE_HPP

#include "fer/features.hpp"
#include "fer/localize.hpp"
#include "fer/susan.hpp"

namespace fer {

struct PipelineParams {
    LocalizeParams localize;
    SusanParams susan;
    ExtractParams extract;
};

struct FaceAnalysis {
    BBox face;              ///< in source image pixels
    GrayImage crop{1, 1};   ///< enlarged face crop the features refer to
    ExtractResult result;
};

/// localize_face -> crop_and_enlarge -> extract. CLAHE only drives localization;
/// the crop is taken from the source image.
FaceAnalysis analyze_face(const GrayImage& image, const PipelineParams& params = {});

/// Maps a box in enlarged-crop pixels back to source-image pixels.
BBox crop_box_to_image(const BBox& box, const BBox& face, const GrayImage& crop);

/// Copy of `crop` with 1-px outlines of the six feature boxes. Outline pixels
/// are 255, or 0 where the underlying pixel is bright (>= 128).
GrayImage annotate(const GrayImage& crop, const FacialFeatures& features);

}  // namespace fer

#endif  // FER_PIPELINE_HPP
