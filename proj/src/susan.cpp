#include "fer/susan.hpp"

#include <array>
#include <cmath>

namespace fer {

void SusanParams::validate() const
{
    if (!(brightness_t >= 1)) throw InvalidArgument("SUSAN brightness threshold must be >= 1");
    if (!(geometric_fraction > 0 && geometric_fraction < 1)) {
        throw InvalidArgument("SUSAN geometric fraction must lie in (0, 1)");
    }
    if (!(mask_radius >= 1)) throw InvalidArgument("SUSAN mask radius must be >= 1");
}

double susan_similarity(double diff, const SusanParams& params)
{
    if (params.hard_similarity) return std::abs(diff) <= params.brightness_t ? 1.0 : 0.0;
    const double r = diff / params.brightness_t;
    const double r2 = r * r;
    return std::exp(-(r2 * r2 * r2));
}

namespace {

// Similarity for every intensity difference -255..255, index diff + 255.
std::array<double, 511> similarity_table(const SusanParams& params)
{
    std::array<double, 511> table{};
    for (int d = -255; d <= 255; ++d) table[d + 255] = susan_similarity(d, params);
    return table;
}

struct Usan {
    double area = 0;
    int mask_pixels = 0;  // clipped count excluding the nucleus
};

Usan usan_at(const GrayImage& image, int cx, int cy, const std::vector<Point>& offsets,
             const std::array<double, 511>& table)
{
    Usan u;
    const int nucleus = image.at(cx, cy);
    auto term = [&](int x, int y) {
        if (!image.contains(x, y)) return 0.0;
        ++u.mask_pixels;
        return table[image.at(x, y) - nucleus + 255];
    };
    // Offsets (dx, dy) and (-dx, dy) are summed as a pair so that a left-right
    // mirrored image yields bit-identical areas.
    for (const auto& o : offsets) {
        if (o.x < 0 || (o.x == 0 && o.y == 0)) continue;
        if (o.x == 0) {
            u.area += term(cx, cy + o.y);
        } else {
            const double right = term(cx + o.x, cy + o.y);
            const double left = term(cx - o.x, cy + o.y);
            u.area += right + left;
        }
    }
    return u;
}

}  // namespace

double usan_area(const GrayImage& image, Point center, const SusanParams& params)
{
    params.validate();
    if (!image.contains(center.x, center.y)) throw InvalidArgument("USAN nucleus outside image");
    const auto se = disk_se(params.mask_radius);
    return usan_at(image, center.x, center.y, se.offsets, similarity_table(params)).area;
}

EdgeStrengthImage susan_edge_strength(const GrayImage& image, const SusanParams& params)
{
    params.validate();
    const auto se = disk_se(params.mask_radius);
    const auto table = similarity_table(params);
    const int n_max = static_cast<int>(se.offsets.size()) - 1;

    EdgeStrengthImage out;
    out.width = image.width();
    out.height = image.height();
    out.g = params.geometric_fraction * n_max;
    out.strength.assign(image.size(), 0.0);
    for (int y = 0; y < image.height(); ++y) {
        for (int x = 0; x < image.width(); ++x) {
            const Usan u = usan_at(image, x, y, se.offsets, table);
            const double g = params.geometric_fraction * u.mask_pixels;
            if (u.area < g) out.strength[static_cast<std::size_t>(y) * image.width() + x] = g - u.area;
        }
    }
    return out;
}

BinaryMask median3x3(const BinaryMask& mask)
{
    BinaryMask out(mask.width(), mask.height());
    for (int y = 0; y < mask.height(); ++y) {
        for (int x = 0; x < mask.width(); ++x) {
            int on = 0;
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) on += mask.get_or(x + dx, y + dy, false) ? 1 : 0;
            }
            out.set(x, y, on >= 5);
        }
    }
    return out;
}

BinaryMask edge_mask(const EdgeStrengthImage& strength, double threshold, bool despeckle)
{
    if (!(threshold >= 0)) throw InvalidArgument("edge threshold must be >= 0");
    BinaryMask mask(strength.width, strength.height);
    for (int y = 0; y < strength.height; ++y) {
        for (int x = 0; x < strength.width; ++x) mask.set(x, y, strength.at(x, y) > threshold);
    }
    return despeckle ? median3x3(mask) : mask;
}

}  // namespace fer
