#include "fer/pipeline.hpp"

#include <algorithm>
#include <cmath>

namespace fer {

FaceAnalysis analyze_face(const GrayImage& image, const PipelineParams& params)
{
    FaceAnalysis a;
    a.face = localize_face(image, params.localize);
    a.crop = crop_and_enlarge(image, a.face, params.localize.resize_scale);
    a.result = extract(a.crop, params.susan, params.extract);
    return a;
}

BBox crop_box_to_image(const BBox& box, const BBox& face, const GrayImage& crop)
{
    const double sx = static_cast<double>(face.w) / crop.width();
    const double sy = static_cast<double>(face.h) / crop.height();
    const int x0 = face.x + static_cast<int>(std::floor(box.x * sx + 0.5));
    const int y0 = face.y + static_cast<int>(std::floor(box.y * sy + 0.5));
    const int x1 = face.x + static_cast<int>(std::floor(box.right() * sx + 0.5));
    const int y1 = face.y + static_cast<int>(std::floor(box.bottom() * sy + 0.5));
    return {x0, y0, std::max(1, x1 - x0), std::max(1, y1 - y0)};
}

GrayImage annotate(const GrayImage& crop, const FacialFeatures& features)
{
    GrayImage out = crop;
    const auto mark = [&](int x, int y) {
        if (!out.contains(x, y)) return;
        out.at(x, y) = crop.at(x, y) >= 128 ? 0 : 255;
    };
    for (const BBox& b : features.boxes()) {
        for (int x = b.x; x < b.right(); ++x) {
            mark(x, b.y);
            mark(x, b.bottom() - 1);
        }
        for (int y = b.y; y < b.bottom(); ++y) {
            mark(b.x, y);
            mark(b.right() - 1, y);
        }
    }
    return out;
}

}  // namespace fer
