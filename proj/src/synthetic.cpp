#include "fer/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace fer {

namespace {

// Blob geometry in face-box fractions: centre (cx, cy), full width and height.
struct Blob {
    double cx, cy, w, h;
};

struct Archetype {
    double brow_cy, brow_w, brow_h;
    double eye_cy, eye_w, eye_h;
    double nose_cy, nose_w, nose_h;
    double mouth_cy, mouth_w, mouth_h;
};

constexpr double kSideCx = 0.28;

// Indexed by Expression. Eyebrow raise widens the brow-eye distance, mouth
// shape moves hm and wm, eye opening moves h2 and h4.
constexpr Archetype kArchetypes[kExpressionCount] = {
    // brow cy  w     h      eye cy  w     h      nose cy w     h      mouth cy w     h
    {0.250, 0.22, 0.060, 0.460, 0.18, 0.110, 0.610, 0.12, 0.080, 0.790, 0.22, 0.130},  // surprise
    {0.300, 0.22, 0.060, 0.460, 0.18, 0.075, 0.610, 0.12, 0.080, 0.790, 0.34, 0.070},  // neutral
    {0.290, 0.20, 0.085, 0.460, 0.17, 0.065, 0.610, 0.12, 0.080, 0.800, 0.28, 0.060},  // sad
    {0.330, 0.22, 0.065, 0.460, 0.18, 0.060, 0.600, 0.16, 0.110, 0.790, 0.30, 0.080},  // disgust
    {0.260, 0.21, 0.070, 0.460, 0.18, 0.095, 0.610, 0.12, 0.080, 0.790, 0.40, 0.085},  // fear
    {0.300, 0.22, 0.060, 0.465, 0.18, 0.060, 0.610, 0.12, 0.080, 0.790, 0.44, 0.095},  // happy
    {0.340, 0.21, 0.075, 0.465, 0.17, 0.065, 0.610, 0.12, 0.080, 0.800, 0.27, 0.060},  // angry
};

std::uint64_t splitmix(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

class Draw {
public:
    explicit Draw(std::uint64_t seed) : rng_(seed) {}

    // Uniform on [-1, 1).
    double symmetric() { return 2.0 * (static_cast<double>(rng_() >> 11) * 0x1.0p-53) - 1.0; }

private:
    std::mt19937_64 rng_;
};

// Paints a filled ellipse and returns the painted pixel extent.
BBox paint_ellipse(GrayImage& img, double cx, double cy, double rx, double ry, std::uint8_t value)
{
    int x0 = img.width(), y0 = img.height(), x1 = -1, y1 = -1;
    const int ylo = std::max(0, static_cast<int>(std::floor(cy - ry)) - 1);
    const int yhi = std::min(img.height() - 1, static_cast<int>(std::ceil(cy + ry)) + 1);
    const int xlo = std::max(0, static_cast<int>(std::floor(cx - rx)) - 1);
    const int xhi = std::min(img.width() - 1, static_cast<int>(std::ceil(cx + rx)) + 1);
    for (int y = ylo; y <= yhi; ++y) {
        for (int x = xlo; x <= xhi; ++x) {
            const double u = (x + 0.5 - cx) / rx;
            const double v = (y + 0.5 - cy) / ry;
            if (u * u + v * v <= 1.0) {
                img.at(x, y) = value;
                x0 = std::min(x0, x);
                y0 = std::min(y0, y);
                x1 = std::max(x1, x);
                y1 = std::max(y1, y);
            }
        }
    }
    if (x1 < 0) return {0, 0, 1, 1};
    return {x0, y0, x1 - x0 + 1, y1 - y0 + 1};
}

}  // namespace

SyntheticFace generate_face(Expression label, std::uint64_t seed, const SyntheticOptions& options, Point offset)
{
    Draw draw(splitmix(seed) ^ (static_cast<std::uint64_t>(label) + 1) * 0x2545f4914f6cdd1dULL);
    const double j = options.jitter;

    // Face box size and placement.
    const double face_w = std::round(options.width * 0.50 * (1.0 + 0.05 * j * draw.symmetric()));
    const double face_h = std::round(face_w * (1.20 + 0.03 * j * draw.symmetric()));
    const double face_cx = std::round(options.width / 2.0 + 5.0 * j * draw.symmetric()) + offset.x;
    const double face_cy = std::round(options.height / 2.0 + 4.0 * j * draw.symmetric()) + offset.y;

    const Archetype& a = kArchetypes[static_cast<std::size_t>(label)];
    const auto size = [&](double v) { return v * (1.0 + 0.06 * j * draw.symmetric()); };
    const auto pos = [&](double v) { return v + 0.006 * j * draw.symmetric(); };

    std::array<Blob, 6> blobs;
    const double brow_cy = pos(a.brow_cy);
    const double eye_cy = pos(a.eye_cy);
    const double brow_w = size(a.brow_w), brow_h = size(a.brow_h);
    const double eye_w = size(a.eye_w), eye_h = size(a.eye_h);
    for (int side = 0; side < 2; ++side) {
        const double cx = side == 0 ? kSideCx : 1.0 - kSideCx;
        blobs[side * 2] = {cx + 0.004 * j * draw.symmetric(), brow_cy + 0.004 * j * draw.symmetric(),
                           brow_w * (1.0 + 0.02 * j * draw.symmetric()), brow_h};
        blobs[side * 2 + 1] = {cx + 0.004 * j * draw.symmetric(), eye_cy + 0.004 * j * draw.symmetric(),
                               eye_w * (1.0 + 0.02 * j * draw.symmetric()), eye_h};
    }
    blobs[4] = {0.5, pos(a.nose_cy), size(a.nose_w), size(a.nose_h)};
    blobs[5] = {0.5, pos(a.mouth_cy), size(a.mouth_w), size(a.mouth_h)};

    GrayImage img(options.width, options.height, options.background);
    const double fx0 = face_cx - face_w / 2.0;
    const double fy0 = face_cy - face_h / 2.0;
    SyntheticFace out{GrayImage(1, 1), label, {}, {}};
    out.face = paint_ellipse(img, face_cx, face_cy, face_w / 2.0, face_h / 2.0, options.skin);
    for (std::size_t k = 0; k < blobs.size(); ++k) {
        const Blob& b = blobs[k];
        out.features[k] = paint_ellipse(img, fx0 + b.cx * face_w, fy0 + b.cy * face_h, b.w * face_w / 2.0,
                                        b.h * face_h / 2.0, options.feature);
    }

    if (options.noise > 0) {
        // Keyed to face-relative coordinates so translated copies carry the same texture.
        const auto ox = static_cast<std::int64_t>(fx0);
        const auto oy = static_cast<std::int64_t>(fy0);
        const auto span = static_cast<std::uint64_t>(2 * options.noise + 1);
        for (int y = 0; y < img.height(); ++y) {
            for (int x = 0; x < img.width(); ++x) {
                const auto rx = static_cast<std::uint64_t>(x - ox + 4096);
                const auto ry = static_cast<std::uint64_t>(y - oy + 4096);
                const auto h = splitmix(seed * 0x9e3779b97f4a7c15ULL ^ (ry << 20 | rx));
                const int n = static_cast<int>(h % span) - options.noise;
                img.at(x, y) = static_cast<std::uint8_t>(std::clamp(img.at(x, y) + n, 0, 255));
            }
        }
    }
    out.image = std::move(img);
    return out;
}

}  // namespace fer
