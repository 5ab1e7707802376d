#include "fer/morphology.hpp"

#include <cmath>
#include <deque>

namespace fer {

namespace {

constexpr int kNeighbors8[8][2] = {{-1, -1}, {0, -1}, {1, -1}, {-1, 0}, {1, 0}, {-1, 1}, {0, 1}, {1, 1}};

void require_same_shape(const BinaryMask& a, const BinaryMask& b)
{
    if (!a.same_shape(b)) throw InvalidArgument("mask shapes differ");
}

}  // namespace

StructuringElement disk_se(double radius)
{
    if (!(radius >= 0)) throw InvalidArgument("disk radius must be >= 0");
    StructuringElement se;
    const int r = static_cast<int>(std::floor(radius));
    const double r2 = radius * radius;
    for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
            if (dx * dx + dy * dy <= r2) se.offsets.push_back({dx, dy});
        }
    }
    return se;
}

StructuringElement square_se()
{
    StructuringElement se;
    for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) se.offsets.push_back({dx, dy});
    }
    return se;
}

BinaryMask dilate(const BinaryMask& mask, const StructuringElement& se)
{
    BinaryMask out(mask.width(), mask.height());
    for (int y = 0; y < mask.height(); ++y) {
        for (int x = 0; x < mask.width(); ++x) {
            if (!mask.at(x, y)) continue;
            for (const auto& s : se.offsets) {
                const int px = x + s.x;
                const int py = y + s.y;
                if (out.contains(px, py)) out.set(px, py, true);
            }
        }
    }
    return out;
}

BinaryMask erode(const BinaryMask& mask, const StructuringElement& se)
{
    BinaryMask out(mask.width(), mask.height());
    for (int y = 0; y < mask.height(); ++y) {
        for (int x = 0; x < mask.width(); ++x) {
            bool all = true;
            for (const auto& s : se.offsets) {
                if (!mask.get_or(x + s.x, y + s.y, false)) {
                    all = false;
                    break;
                }
            }
            out.set(x, y, all);
        }
    }
    return out;
}

BinaryMask complement(const BinaryMask& mask)
{
    BinaryMask out(mask.width(), mask.height());
    for (int y = 0; y < mask.height(); ++y) {
        for (int x = 0; x < mask.width(); ++x) out.set(x, y, !mask.at(x, y));
    }
    return out;
}

BinaryMask intersect(const BinaryMask& a, const BinaryMask& b)
{
    require_same_shape(a, b);
    BinaryMask out(a.width(), a.height());
    for (int y = 0; y < a.height(); ++y) {
        for (int x = 0; x < a.width(); ++x) out.set(x, y, a.at(x, y) && b.at(x, y));
    }
    return out;
}

BinaryMask subtract(const BinaryMask& a, const BinaryMask& b)
{
    require_same_shape(a, b);
    BinaryMask out(a.width(), a.height());
    for (int y = 0; y < a.height(); ++y) {
        for (int x = 0; x < a.width(); ++x) out.set(x, y, a.at(x, y) && !b.at(x, y));
    }
    return out;
}

BinaryMask reconstruct(const BinaryMask& marker, const BinaryMask& mask)
{
    require_same_shape(marker, mask);
    // Breadth-first geodesic dilation; reaches the same fixpoint as iterating
    // dilate-then-intersect with the 3x3 element.
    BinaryMask out(mask.width(), mask.height());
    std::deque<Point> queue;
    for (int y = 0; y < mask.height(); ++y) {
        for (int x = 0; x < mask.width(); ++x) {
            if (marker.at(x, y) && mask.at(x, y)) {
                out.set(x, y, true);
                queue.push_back({x, y});
            }
        }
    }
    while (!queue.empty()) {
        const Point p = queue.front();
        queue.pop_front();
        for (const auto& d : kNeighbors8) {
            const int nx = p.x + d[0];
            const int ny = p.y + d[1];
            if (mask.contains(nx, ny) && mask.at(nx, ny) && !out.at(nx, ny)) {
                out.set(nx, ny, true);
                queue.push_back({nx, ny});
            }
        }
    }
    return out;
}

std::vector<int> reconstruct_gray(std::vector<int> marker, const std::vector<int>& mask, int width, int height)
{
    const auto idx = [width](int x, int y) { return static_cast<std::size_t>(y) * width + x; };
    for (std::size_t i = 0; i < marker.size(); ++i) marker[i] = std::min(marker[i], mask[i]);

    // Alternating raster / anti-raster sweeps until nothing changes.
    bool changed = true;
    while (changed) {
        changed = false;
        for (int pass = 0; pass < 2; ++pass) {
            const bool forward = pass == 0;
            for (int yy = 0; yy < height; ++yy) {
                const int y = forward ? yy : height - 1 - yy;
                for (int xx = 0; xx < width; ++xx) {
                    const int x = forward ? xx : width - 1 - xx;
                    int best = marker[idx(x, y)];
                    for (const auto& d : kNeighbors8) {
                        const int nx = x + d[0];
                        const int ny = y + d[1];
                        if (nx >= 0 && ny >= 0 && nx < width && ny < height) best = std::max(best, marker[idx(nx, ny)]);
                    }
                    best = std::min(best, mask[idx(x, y)]);
                    if (best != marker[idx(x, y)]) {
                        marker[idx(x, y)] = best;
                        changed = true;
                    }
                }
            }
        }
    }
    return marker;
}

BinaryMask regional_maxima(const GrayImage& image)
{
    std::vector<int> mask(image.pixels().begin(), image.pixels().end());
    std::vector<int> marker(mask);
    for (auto& v : marker) v -= 1;
    const auto rec = reconstruct_gray(std::move(marker), mask, image.width(), image.height());

    BinaryMask out(image.width(), image.height());
    for (int y = 0; y < image.height(); ++y) {
        for (int x = 0; x < image.width(); ++x) {
            const auto i = static_cast<std::size_t>(y) * image.width() + x;
            out.set(x, y, mask[i] - rec[i] > 0);
        }
    }
    return out;
}

BinaryMask clear_border(const BinaryMask& mask)
{
    BinaryMask seeds(mask.width(), mask.height());
    for (int y = 0; y < mask.height(); ++y) {
        for (int x = 0; x < mask.width(); ++x) {
            const bool edge = x == 0 || y == 0 || x == mask.width() - 1 || y == mask.height() - 1;
            if (edge && mask.at(x, y)) seeds.set(x, y, true);
        }
    }
    return subtract(mask, reconstruct(seeds, mask));
}

}  // namespace fer
