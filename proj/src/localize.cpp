#include "fer/localize.hpp"

#include "fer/features.hpp"
#include "fer/morphology.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace fer {

void LocalizeParams::validate() const
{
    if (se_radius < 1) throw InvalidArgument("se_radius must be >= 1");
    if (!(resize_scale >= 1.0)) throw InvalidArgument("resize_scale must be >= 1");
    if (threshold && (*threshold < 0 || *threshold > 255)) throw InvalidArgument("threshold must lie in 0..255");
    clahe.validate();
}

int otsu_threshold(const GrayImage& image)
{
    std::array<double, 256> hist{};
    for (auto v : image.pixels()) hist[v] += 1.0;
    const double total = static_cast<double>(image.size());

    double sum_all = 0;
    for (int v = 0; v < 256; ++v) sum_all += v * hist[v];

    // Single populated level: the split is degenerate, report that level.
    int lo = 0;
    while (hist[lo] == 0) ++lo;
    int hi = 255;
    while (hist[hi] == 0) --hi;
    if (lo == hi) return lo;

    double w0 = 0;
    double sum0 = 0;
    double best = -1;
    int best_level = lo;
    for (int t = 0; t < 255; ++t) {
        w0 += hist[t];
        sum0 += t * hist[t];
        const double w1 = total - w0;
        if (w0 == 0 || w1 == 0) continue;
        const double m0 = sum0 / w0;
        const double m1 = (sum_all - sum0) / w1;
        const double between = w0 * w1 * (m0 - m1) * (m0 - m1);
        if (between > best) {
            best = between;
            best_level = t;
        }
    }
    return best_level;
}

BinaryMask binarize(const GrayImage& image, int level, Polarity polarity)
{
    BinaryMask out(image.width(), image.height());
    for (int y = 0; y < image.height(); ++y) {
        for (int x = 0; x < image.width(); ++x) {
            const int v = image.at(x, y);
            out.set(x, y, polarity == Polarity::dark ? v <= level : v > level);
        }
    }
    return out;
}

BBox localize_face(const GrayImage& image, const LocalizeParams& params)
{
    params.validate();
    const int diameter = 2 * params.se_radius + 1;
    if (image.width() <= 2 * diameter || image.height() <= 2 * diameter) {
        throw InvalidArgument("image " + std::to_string(image.width()) + "x" + std::to_string(image.height()) +
                              " too small for se radius " + std::to_string(params.se_radius));
    }

    const GrayImage enhanced = clahe(image, params.clahe);
    const int level = params.threshold ? *params.threshold : otsu_threshold(enhanced);
    const BinaryMask foreground = binarize(enhanced, level, params.polarity);
    const std::size_t fg_count = foreground.popcount();
    if (fg_count == 0 || fg_count == foreground.size()) {
        throw NoFaceFound("binarization at level " + std::to_string(level) + " separates nothing");
    }

    const StructuringElement se = disk_se(params.se_radius);
    BinaryMask marker = dilate(erode(foreground, se), se);
    if (params.regional_max_marker) {
        GrayImage oriented = enhanced;
        if (params.polarity == Polarity::dark) {
            for (auto& v : oriented.pixels()) v = static_cast<std::uint8_t>(255 - v);
        }
        const BinaryMask peaks = intersect(regional_maxima(oriented), foreground);
        for (int y = 0; y < marker.height(); ++y) {
            for (int x = 0; x < marker.width(); ++x) {
                if (peaks.at(x, y)) marker.set(x, y, true);
            }
        }
    }

    BinaryMask region = reconstruct(marker, foreground);
    if (region.empty()) region = foreground;
    BinaryMask cleared = clear_border(region);
    if (cleared.empty()) cleared = region;

    const auto components = label_components(cleared);
    if (components.empty()) throw NoFaceFound("no foreground component survived");
    const auto largest = std::max_element(components.begin(), components.end(),
                                          [](const Segment& a, const Segment& b) { return a.area < b.area; });
    return largest->box;
}

GrayImage crop_and_enlarge(const GrayImage& image, const BBox& box, double scale)
{
    if (!(scale >= 1.0)) throw InvalidArgument("enlarge scale must be >= 1");
    const GrayImage face = crop(image, box);
    const int w = static_cast<int>(std::floor(box.w * scale + 0.5));
    const int h = static_cast<int>(std::floor(box.h * scale + 0.5));
    return resize_bilinear(face, w, h);
}

}  // namespace fer
