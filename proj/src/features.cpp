#include "fer/features.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

namespace fer {

std::string_view region_name(Region r)
{
    switch (r) {
    case Region::unset: return "unset";
    case Region::upper_left: return "upper_left";
    case Region::upper_right: return "upper_right";
    case Region::lower: return "lower";
    case Region::outside: return "outside";
    }
    return "unknown";
}

const std::array<std::string_view, kFeatureCount>& feature_names()
{
    static constexpr std::array<std::string_view, kFeatureCount> names = {
        "h1", "w1", "h2", "w2", "h3", "w3", "h4", "w4", "hn", "wn", "hm", "wm", "d1", "d2", "d3"};
    return names;
}

void ExtractParams::validate() const
{
    if (min_area && *min_area < 1) throw InvalidArgument("minimum segment area must be >= 1");
    if (!(min_area_fraction >= 0 && min_area_fraction < 1)) {
        throw InvalidArgument("minimum area fraction must lie in [0, 1)");
    }
    if (!upper_left_margins.valid() || !upper_right_margins.valid() || !lower_margins.valid()) {
        throw InvalidArgument("region margins must lie inside [0,1]^2");
    }
    if (!(edge_threshold >= 0)) throw InvalidArgument("edge threshold must be >= 0");
}

long ExtractParams::resolve_min_area(int crop_w, int crop_h) const
{
    if (min_area) return *min_area;
    const double p = std::floor(min_area_fraction * crop_w * crop_h + 0.5);
    return std::max(1L, static_cast<long>(p));
}

std::vector<Segment> label_components(const BinaryMask& mask)
{
    static constexpr int kSteps[8][2] = {{-1, -1}, {0, -1}, {1, -1}, {-1, 0}, {1, 0}, {-1, 1}, {0, 1}, {1, 1}};
    std::vector<Segment> out;
    std::vector<std::uint8_t> seen(mask.size(), 0);
    std::vector<Point> stack;
    const auto idx = [&](int x, int y) { return static_cast<std::size_t>(y) * mask.width() + x; };

    for (int y = 0; y < mask.height(); ++y) {
        for (int x = 0; x < mask.width(); ++x) {
            if (!mask.at(x, y) || seen[idx(x, y)]) continue;
            int x0 = x, x1 = x, y0 = y, y1 = y;
            long area = 0;
            seen[idx(x, y)] = 1;
            stack.push_back({x, y});
            while (!stack.empty()) {
                const Point p = stack.back();
                stack.pop_back();
                ++area;
                x0 = std::min(x0, p.x);
                x1 = std::max(x1, p.x);
                y0 = std::min(y0, p.y);
                y1 = std::max(y1, p.y);
                for (const auto& s : kSteps) {
                    const int nx = p.x + s[0];
                    const int ny = p.y + s[1];
                    if (mask.contains(nx, ny) && mask.at(nx, ny) && !seen[idx(nx, ny)]) {
                        seen[idx(nx, ny)] = 1;
                        stack.push_back({nx, ny});
                    }
                }
            }
            out.push_back({{x0, y0, x1 - x0 + 1, y1 - y0 + 1}, area, Region::unset});
        }
    }
    return out;
}

std::vector<Segment> remove_small(std::vector<Segment> segments, long min_area)
{
    if (min_area < 1) throw InvalidArgument("minimum segment area must be >= 1");
    std::erase_if(segments, [min_area](const Segment& s) { return s.area < min_area; });
    return segments;
}

namespace {

bool inside(const BBox& box, const NormRect& r, int w, int h)
{
    return box.x >= r.x0 * w && box.right() <= r.x1 * w && box.y >= r.y0 * h && box.bottom() <= r.y1 * h;
}

bool projections_overlap(const BBox& a, const BBox& b, MergeAxis axis)
{
    if (axis == MergeAxis::x) return a.x < b.right() && b.x < a.right();
    return a.y < b.bottom() && b.y < a.bottom();
}

Segment merged(const Segment& a, const Segment& b)
{
    return {box_union(a.box, b.box), a.area + b.area, a.region};
}

double center_dist2(const BBox& a, const BBox& b)
{
    const double dx = a.center_x() - b.center_x();
    const double dy = a.center_y() - b.center_y();
    return dx * dx + dy * dy;
}

// Groups of segments chained by projection overlap; each group lists indices
// in ascending order and groups are ordered by their first index.
std::vector<std::vector<std::size_t>> overlap_groups(const std::vector<Segment>& segs, MergeAxis axis)
{
    std::vector<std::size_t> parent(segs.size());
    std::iota(parent.begin(), parent.end(), 0);
    const auto find = [&](std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (std::size_t i = 0; i < segs.size(); ++i) {
        for (std::size_t j = i + 1; j < segs.size(); ++j) {
            if (projections_overlap(segs[i].box, segs[j].box, axis)) {
                const auto a = find(i);
                const auto b = find(j);
                if (a != b) parent[std::max(a, b)] = std::min(a, b);
            }
        }
    }
    std::vector<std::vector<std::size_t>> groups;
    std::vector<std::size_t> slot(segs.size(), segs.size());
    for (std::size_t i = 0; i < segs.size(); ++i) {
        const auto root = find(i);
        if (slot[root] == segs.size()) {
            slot[root] = groups.size();
            groups.emplace_back();
        }
        groups[slot[root]].push_back(i);
    }
    return groups;
}

}  // namespace

RegionSplit partition_regions(const std::vector<Segment>& segments, int crop_w, int crop_h,
                              const ExtractParams& params)
{
    RegionSplit split;
    const double cx = crop_w / 2.0;
    const double cy = crop_h / 2.0;
    for (Segment s : segments) {
        Region region;
        const NormRect* margins;
        if (s.box.center_y() < cy) {
            region = s.box.center_x() < cx ? Region::upper_left : Region::upper_right;
            margins = region == Region::upper_left ? &params.upper_left_margins : &params.upper_right_margins;
        } else {
            region = Region::lower;
            margins = &params.lower_margins;
        }
        if (!inside(s.box, *margins, crop_w, crop_h)) continue;
        s.region = region;
        switch (region) {
        case Region::upper_left: split.upper_left.push_back(s); break;
        case Region::upper_right: split.upper_right.push_back(s); break;
        default: split.lower.push_back(s); break;
        }
    }
    return split;
}

std::vector<Segment> merge_to_two(std::vector<Segment> segments, MergeAxis axis)
{
    while (segments.size() > 2) {
        const auto groups = overlap_groups(segments, axis);
        if (groups.size() >= 2 && groups.size() < segments.size()) {
            std::vector<Segment> next;
            next.reserve(groups.size());
            for (const auto& g : groups) {
                Segment acc = segments[g.front()];
                for (std::size_t k = 1; k < g.size(); ++k) acc = merged(acc, segments[g[k]]);
                next.push_back(acc);
            }
            segments = std::move(next);
            continue;
        }

        // Closest centres; ties by smaller combined area, then the leftmost-topmost union centre.
        std::size_t bi = 0, bj = 1;
        auto key = [&](std::size_t i, std::size_t j) {
            const BBox u = box_union(segments[i].box, segments[j].box);
            return std::make_tuple(center_dist2(segments[i].box, segments[j].box), segments[i].area + segments[j].area,
                                   u.center_x(), u.center_y());
        };
        auto best = key(0, 1);
        for (std::size_t i = 0; i < segments.size(); ++i) {
            for (std::size_t j = i + 1; j < segments.size(); ++j) {
                const auto k = key(i, j);
                if (k < best) {
                    best = k;
                    bi = i;
                    bj = j;
                }
            }
        }
        segments[bi] = merged(segments[bi], segments[bj]);
        segments.erase(segments.begin() + static_cast<std::ptrdiff_t>(bj));
    }
    return segments;
}

namespace {

// Returns {upper, lower} of a two-segment list by centre-y; flatter box first on ties.
std::pair<BBox, BBox> order_pair(const std::vector<Segment>& pair, std::string_view region)
{
    if (pair.size() != 2) throw FeatureCountError(std::string(region), pair.size());
    const BBox& a = pair[0].box;
    const BBox& b = pair[1].box;
    const bool a_first = a.center_y() < b.center_y() || (a.center_y() == b.center_y() && a.h <= b.h);
    return a_first ? std::make_pair(a, b) : std::make_pair(b, a);
}

}  // namespace

FacialFeatures assign_features(const std::vector<Segment>& upper_left, const std::vector<Segment>& upper_right,
                               const std::vector<Segment>& lower, int crop_w, int crop_h)
{
    FacialFeatures f;
    std::tie(f.left_eyebrow, f.left_eye) = order_pair(upper_left, "upper_left");
    std::tie(f.right_eyebrow, f.right_eye) = order_pair(upper_right, "upper_right");
    std::tie(f.nose, f.mouth) = order_pair(lower, "lower");
    f.crop_width = crop_w;
    f.crop_height = crop_h;
    return f;
}

FeatureVector feature_vector(const FacialFeatures& f, bool normalize)
{
    const auto dist = [](const BBox& a, const BBox& b) { return std::sqrt(center_dist2(a, b)); };
    FeatureVector v;
    v.values = {
        static_cast<double>(f.left_eyebrow.h),  static_cast<double>(f.left_eyebrow.w),
        static_cast<double>(f.left_eye.h),      static_cast<double>(f.left_eye.w),
        static_cast<double>(f.right_eyebrow.h), static_cast<double>(f.right_eyebrow.w),
        static_cast<double>(f.right_eye.h),     static_cast<double>(f.right_eye.w),
        static_cast<double>(f.nose.h),          static_cast<double>(f.nose.w),
        static_cast<double>(f.mouth.h),         static_cast<double>(f.mouth.w),
        dist(f.left_eyebrow, f.left_eye),       dist(f.right_eyebrow, f.right_eye),
        dist(f.nose, f.mouth),
    };
    if (normalize) {
        const double diag = std::hypot(static_cast<double>(f.crop_width), static_cast<double>(f.crop_height));
        for (auto& x : v.values) x /= diag;
    }
    return v;
}

ExtractResult extract(const GrayImage& face_crop, const SusanParams& susan, const ExtractParams& params)
{
    params.validate();
    const auto strength = susan_edge_strength(face_crop, susan);
    const auto edges = edge_mask(strength, params.edge_threshold, params.despeckle);
    const int w = face_crop.width();
    const int h = face_crop.height();
    auto segments = remove_small(label_components(edges), params.resolve_min_area(w, h));
    const auto split = partition_regions(segments, w, h, params);

    ExtractResult r;
    r.features = assign_features(merge_to_two(split.upper_left, params.merge_axis),
                                 merge_to_two(split.upper_right, params.merge_axis),
                                 merge_to_two(split.lower, params.merge_axis), w, h);
    r.vector = feature_vector(r.features, params.normalize);
    return r;
}

}  // namespace fer
