#ifndef FER_IMAGE_HPP
#define FER_IMAGE_HPP

#include "fer/error.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace fer {

struct Point {
    int x = 0;
    int y = 0;

    friend bool operator==(const Point&, const Point&) = default;
};

/// Axis-aligned box, top-left corner plus extent, in pixels.
struct BBox {
    int x = 0;
    int y = 0;
    int w = 1;
    int h = 1;

    int right() const { return x + w; }   ///< one past the last column
    int bottom() const { return y + h; }  ///< one past the last row
    double center_x() const { return x + w / 2.0; }
    double center_y() const { return y + h / 2.0; }
    long area() const { return static_cast<long>(w) * h; }

    friend bool operator==(const BBox&, const BBox&) = default;
};

std::string to_string(const BBox& box);

/// Smallest box covering both inputs.
BBox box_union(const BBox& a, const BBox& b);

/// Intersection-over-union of two boxes, 0 when disjoint.
double iou(const BBox& a, const BBox& b);

/// 8-bit grayscale raster, row-major, 0 = black.
class GrayImage {
public:
    /// Throws InvalidArgument unless width, height >= 1.
    GrayImage(int width, int height, std::uint8_t fill = 0);
    GrayImage(int width, int height, std::vector<std::uint8_t> pixels);

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t size() const { return pixels_.size(); }

    std::uint8_t at(int x, int y) const { return pixels_[index(x, y)]; }
    std::uint8_t& at(int x, int y) { return pixels_[index(x, y)]; }
    bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }
    bool contains(const BBox& box) const;

    std::span<const std::uint8_t> pixels() const { return pixels_; }
    std::span<std::uint8_t> pixels() { return pixels_; }

    friend bool operator==(const GrayImage&, const GrayImage&) = default;

private:
    std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
    }

    int width_;
    int height_;
    std::vector<std::uint8_t> pixels_;
};

/// Boolean raster with the same layout as GrayImage.
class BinaryMask {
public:
    BinaryMask(int width, int height, bool fill = false);

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t size() const { return bits_.size(); }

    bool at(int x, int y) const { return bits_[index(x, y)] != 0; }
    void set(int x, int y, bool v) { bits_[index(x, y)] = v ? 1 : 0; }
    bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }
    /// Reads outside the raster return `outside`.
    bool get_or(int x, int y, bool outside) const { return contains(x, y) ? at(x, y) : outside; }

    std::size_t popcount() const;
    bool empty() const { return popcount() == 0; }
    bool same_shape(const BinaryMask& o) const { return width_ == o.width_ && height_ == o.height_; }

    friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

private:
    std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
    }

    int width_;
    int height_;
    std::vector<std::uint8_t> bits_;
};

class BoundsError : public Error {
public:
    BoundsError(const BBox& box, int width, int height);

    const BBox& box() const noexcept { return box_; }

private:
    BBox box_;
};

/// Parses a binary (P5) or ASCII (P2) PGM stream with maxval <= 255.
/// Sample values are returned unscaled.
GrayImage decode_pgm(std::span<const std::uint8_t> bytes);

/// Emits binary P5 with maxval 255: "P5\n<w> <h>\n255\n" followed by the raster.
std::vector<std::uint8_t> encode_pgm(const GrayImage& image);

GrayImage read_pgm(const std::string& path);
void write_pgm(const std::string& path, const GrayImage& image);

GrayImage crop(const GrayImage& image, const BBox& box);

/// Corner-aligned bilinear resampling with half-up rounding.
GrayImage resize_bilinear(const GrayImage& image, int new_w, int new_h);

}  // namespace fer

#endif  // FER_IMAGE_HPP
