#ifndef FER_FEATURES_HPP
#define FER_FEATURES_HPP

#include "fer/image.hpp"
#include "fer/susan.hpp"

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fer {

enum class Region { unset, upper_left, upper_right, lower, outside };

std::string_view region_name(Region r);

struct Segment {
    BBox box;
    long area = 1;
    Region region = Region::unset;

    friend bool operator==(const Segment&, const Segment&) = default;
};

/// Rectangle in normalized crop coordinates, [x0, x1] x [y0, y1] within [0, 1]^2.
struct NormRect {
    double x0 = 0;
    double x1 = 1;
    double y0 = 0;
    double y1 = 1;

    bool valid() const { return 0 <= x0 && x0 <= x1 && x1 <= 1 && 0 <= y0 && y0 <= y1 && y1 <= 1; }
};

/// Which box projection decides that two segments overlap during merging.
enum class MergeAxis { x, y };

struct ExtractParams {
    /// Absolute minimum segment area P; when unset P = min_area_fraction * crop area.
    std::optional<long> min_area;
    double min_area_fraction = 0.0005;
    NormRect upper_left_margins{0.05, 0.45, 0.15, 0.55};
    NormRect upper_right_margins{0.55, 0.95, 0.15, 0.55};
    NormRect lower_margins{0.25, 0.75, 0.50, 0.95};
    MergeAxis merge_axis = MergeAxis::x;
    double edge_threshold = 2.0;
    bool despeckle = true;
    /// Divide every feature by the crop diagonal.
    bool normalize = true;

    void validate() const;
    long resolve_min_area(int crop_w, int crop_h) const;
};

struct FacialFeatures {
    BBox left_eyebrow;
    BBox left_eye;
    BBox right_eyebrow;
    BBox right_eye;
    BBox nose;
    BBox mouth;
    int crop_width = 1;
    int crop_height = 1;

    std::array<BBox, 6> boxes() const { return {left_eyebrow, left_eye, right_eyebrow, right_eye, nose, mouth}; }
};

inline constexpr std::size_t kFeatureCount = 15;

/// Ordered as {H1,W1,H2,W2,H3,W3,H4,W4,Hn,Wn,Hm,Wm,D1,D2,D3}.
struct FeatureVector {
    std::array<double, kFeatureCount> values{};

    double operator[](std::size_t i) const { return values[i]; }
    double& operator[](std::size_t i) { return values[i]; }

    friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

/// Column names of the feature file, in vector order.
const std::array<std::string_view, kFeatureCount>& feature_names();

struct RegionSplit {
    std::vector<Segment> upper_left;
    std::vector<Segment> upper_right;
    std::vector<Segment> lower;
};

/// 8-connected components in raster order of their first pixel.
std::vector<Segment> label_components(const BinaryMask& mask);

/// Keeps segments with area >= min_area, preserving order.
std::vector<Segment> remove_small(std::vector<Segment> segments, long min_area);

/// Splits by the crop centre (box centre y < h/2 is upper, x < w/2 is left).
/// A segment whose box is not fully inside its region's margin rectangle is dropped.
RegionSplit partition_regions(const std::vector<Segment>& segments, int crop_w, int crop_h,
                              const ExtractParams& params);

/// Merges segments until at most two remain. Each round first unions the
/// groups of segments chained by projection overlap (skipped when that would
/// leave fewer than two), otherwise merges the closest pair of centres.
std::vector<Segment> merge_to_two(std::vector<Segment> segments, MergeAxis axis = MergeAxis::x);

/// Upper pairs: smaller centre-y is the eyebrow. Lower pair: smaller centre-y
/// is the nose. Throws FeatureCountError when a list does not hold exactly two.
FacialFeatures assign_features(const std::vector<Segment>& upper_left, const std::vector<Segment>& upper_right,
                               const std::vector<Segment>& lower, int crop_w, int crop_h);

FeatureVector feature_vector(const FacialFeatures& features, bool normalize = true);

struct ExtractResult {
    FacialFeatures features;
    FeatureVector vector;
};

/// Full chain: SUSAN strength, edge mask, labeling, small-segment removal,
/// region partition, per-region merge, assignment and feature vector.
ExtractResult extract(const GrayImage& face_crop, const SusanParams& susan = {}, const ExtractParams& params = {});

}  // namespace fer

#endif  // FER_FEATURES_HPP
