#include "fer/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace fer {

void ClaheParams::validate() const
{
    if (tiles_x < 1 || tiles_y < 1) throw InvalidArgument("CLAHE tile grid must be at least 1x1");
    if (!(clip_limit >= 1.0)) throw InvalidArgument("CLAHE clip limit must be >= 1.0");
}

std::uint32_t clip_ceiling(double clip_limit, std::uint32_t tile_pixels)
{
    const double limit = std::ceil(clip_limit * tile_pixels / 256.0);
    if (!std::isfinite(limit) || limit >= tile_pixels) return tile_pixels;
    return std::max<std::uint32_t>(1, static_cast<std::uint32_t>(limit));
}

std::uint32_t clip_histogram(Histogram& hist, double clip_limit, std::uint32_t tile_pixels)
{
    const std::uint32_t limit = clip_ceiling(clip_limit, tile_pixels);
    std::uint32_t excess = 0;
    for (auto bin : hist) excess += bin > limit ? bin - limit : 0;
    const std::uint32_t clipped = excess;
    if (excess == 0) return 0;

    // Uniform pass: each bin takes excess / 256, topped out at the limit.
    const std::uint32_t share = excess / 256;
    for (auto& bin : hist) {
        if (bin >= limit) {
            bin = limit;
        } else {
            const std::uint32_t add = std::min(share, limit - bin);
            bin += add;
            excess -= add;
        }
    }
    // Whatever is left goes one count at a time to evenly spaced bins below the limit.
    for (std::uint32_t start = 0; excess > 0; start = (start + 1) % 256) {
        const std::uint32_t step = std::max<std::uint32_t>(1, 256 / excess);
        for (std::uint32_t i = start; i < 256 && excess > 0; i += step) {
            if (hist[i] < limit) {
                ++hist[i];
                --excess;
            }
        }
    }
    return clipped;
}

std::array<std::uint8_t, 256> tile_mapping(const Histogram& raw, double clip_limit)
{
    std::array<std::uint8_t, 256> lut{};
    std::uint32_t total = 0;
    int occupied = 0;
    for (auto c : raw) {
        total += c;
        if (c > 0) ++occupied;
    }
    if (occupied <= 1) {
        for (int v = 0; v < 256; ++v) lut[v] = static_cast<std::uint8_t>(v);
        return lut;
    }

    Histogram hist = raw;
    clip_histogram(hist, clip_limit, total);

    std::uint32_t cdf_min = 0;
    for (auto c : hist) {
        if (c > 0) {
            cdf_min = c;
            break;
        }
    }
    const double span = static_cast<double>(total) - cdf_min;
    std::uint32_t cdf = 0;
    for (int v = 0; v < 256; ++v) {
        cdf += hist[v];
        const double scaled = span > 0 ? 255.0 * (static_cast<double>(cdf) - cdf_min) / span : v;
        lut[v] = static_cast<std::uint8_t>(std::clamp(std::floor(scaled + 0.5), 0.0, 255.0));
    }
    return lut;
}

namespace {

// Tile boundaries along one axis: tile i spans [edges[i], edges[i+1]).
std::vector<int> tile_edges(int length, int tiles)
{
    std::vector<int> edges(static_cast<std::size_t>(tiles) + 1);
    for (int i = 0; i <= tiles; ++i) edges[i] = static_cast<int>(static_cast<long>(i) * length / tiles);
    return edges;
}

struct AxisWeight {
    int lo;
    int hi;
    double t;  // weight of `hi`
};

// Interpolation neighbors along one axis; positions outside the outermost
// tile centers clamp to that tile.
std::vector<AxisWeight> axis_weights(const std::vector<int>& edges)
{
    const int tiles = static_cast<int>(edges.size()) - 1;
    std::vector<double> centers(tiles);
    for (int i = 0; i < tiles; ++i) centers[i] = (edges[i] + edges[i + 1] - 1) / 2.0;

    std::vector<AxisWeight> out(static_cast<std::size_t>(edges.back()));
    int k = 0;
    for (int p = 0; p < edges.back(); ++p) {
        if (p <= centers.front()) {
            out[p] = {0, 0, 0.0};
        } else if (p >= centers.back()) {
            out[p] = {tiles - 1, tiles - 1, 0.0};
        } else {
            while (centers[k + 1] <= p) ++k;
            out[p] = {k, k + 1, (p - centers[k]) / (centers[k + 1] - centers[k])};
        }
    }
    return out;
}

}  // namespace

GrayImage clahe(const GrayImage& image, const ClaheParams& params)
{
    params.validate();
    if (params.tiles_x > image.width() || params.tiles_y > image.height()) {
        throw InvalidArgument("CLAHE tile grid " + std::to_string(params.tiles_x) + "x" +
                              std::to_string(params.tiles_y) + " exceeds image " +
                              std::to_string(image.width()) + "x" + std::to_string(image.height()));
    }

    const auto xs = tile_edges(image.width(), params.tiles_x);
    const auto ys = tile_edges(image.height(), params.tiles_y);

    std::vector<std::array<std::uint8_t, 256>> luts;
    luts.reserve(static_cast<std::size_t>(params.tiles_x) * params.tiles_y);
    for (int ty = 0; ty < params.tiles_y; ++ty) {
        for (int tx = 0; tx < params.tiles_x; ++tx) {
            Histogram hist{};
            for (int y = ys[ty]; y < ys[ty + 1]; ++y) {
                for (int x = xs[tx]; x < xs[tx + 1]; ++x) ++hist[image.at(x, y)];
            }
            luts.push_back(tile_mapping(hist, params.clip_limit));
        }
    }
    const auto lut = [&](int tx, int ty) -> const std::array<std::uint8_t, 256>& {
        return luts[static_cast<std::size_t>(ty) * params.tiles_x + tx];
    };

    const auto wx = axis_weights(xs);
    const auto wy = axis_weights(ys);
    GrayImage out(image.width(), image.height());
    for (int y = 0; y < image.height(); ++y) {
        const auto& ay = wy[y];
        for (int x = 0; x < image.width(); ++x) {
            const auto& ax = wx[x];
            const auto v = image.at(x, y);
            const double top = lut(ax.lo, ay.lo)[v] * (1.0 - ax.t) + lut(ax.hi, ay.lo)[v] * ax.t;
            const double bot = lut(ax.lo, ay.hi)[v] * (1.0 - ax.t) + lut(ax.hi, ay.hi)[v] * ax.t;
            const double mixed = top * (1.0 - ay.t) + bot * ay.t;
            out.at(x, y) = static_cast<std::uint8_t>(std::clamp(std::floor(mixed + 0.5), 0.0, 255.0));
        }
    }
    return out;
}

}  // namespace fer
