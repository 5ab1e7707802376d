#include "fer/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

namespace fer {

std::string to_string(const BBox& box)
{
    std::ostringstream os;
    os << "(" << box.x << "," << box.y << "," << box.w << "," << box.h << ")";
    return os.str();
}

BBox box_union(const BBox& a, const BBox& b)
{
    const int x0 = std::min(a.x, b.x);
    const int y0 = std::min(a.y, b.y);
    const int x1 = std::max(a.right(), b.right());
    const int y1 = std::max(a.bottom(), b.bottom());
    return {x0, y0, x1 - x0, y1 - y0};
}

double iou(const BBox& a, const BBox& b)
{
    const int ix = std::max(0, std::min(a.right(), b.right()) - std::max(a.x, b.x));
    const int iy = std::max(0, std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y));
    const double inter = static_cast<double>(ix) * iy;
    const double uni = static_cast<double>(a.area()) + static_cast<double>(b.area()) - inter;
    return uni > 0 ? inter / uni : 0.0;
}

GrayImage::GrayImage(int width, int height, std::uint8_t fill)
    : width_(width), height_(height)
{
    if (width < 1 || height < 1) {
        throw InvalidArgument("image dimensions must be >= 1, got " + std::to_string(width) + "x" +
                              std::to_string(height));
    }
    pixels_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

GrayImage::GrayImage(int width, int height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels))
{
    if (width < 1 || height < 1) {
        throw InvalidArgument("image dimensions must be >= 1, got " + std::to_string(width) + "x" +
                              std::to_string(height));
    }
    if (pixels_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
        throw InvalidArgument("pixel buffer length does not match " + std::to_string(width) + "x" +
                              std::to_string(height));
    }
}

bool GrayImage::contains(const BBox& box) const
{
    return box.w >= 1 && box.h >= 1 && box.x >= 0 && box.y >= 0 && box.right() <= width_ &&
           box.bottom() <= height_;
}

BinaryMask::BinaryMask(int width, int height, bool fill)
    : width_(width), height_(height)
{
    if (width < 1 || height < 1) {
        throw InvalidArgument("mask dimensions must be >= 1");
    }
    bits_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill ? 1 : 0);
}

std::size_t BinaryMask::popcount() const
{
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

BoundsError::BoundsError(const BBox& box, int width, int height)
    : Error("out of bounds", "box " + to_string(box) + " does not fit in " + std::to_string(width) +
                                 "x" + std::to_string(height) + " image"),
      box_(box)
{
}

namespace {

class PgmReader {
public:
    explicit PgmReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::size_t pos() const { return pos_; }
    bool at_end() const { return pos_ >= bytes_.size(); }

    // Skips whitespace and '#' comments running to end of line.
    void skip_separators()
    {
        while (!at_end()) {
            const auto c = bytes_[pos_];
            if (c == '#') {
                while (!at_end() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
            } else if (std::isspace(c)) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    long read_uint(const char* what)
    {
        skip_separators();
        if (at_end()) throw DecodeError("truncated", pos_, std::string("missing ") + what);
        if (!std::isdigit(bytes_[pos_])) {
            throw DecodeError("malformed header", pos_, std::string("expected ") + what);
        }
        long v = 0;
        while (!at_end() && std::isdigit(bytes_[pos_])) {
            v = v * 10 + (bytes_[pos_] - '0');
            if (v > 1'000'000'000L) throw DecodeError("malformed header", pos_, std::string(what) + " too large");
            ++pos_;
        }
        return v;
    }

    std::uint8_t byte() { return bytes_[pos_++]; }
    std::size_t remaining() const { return bytes_.size() - pos_; }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

}  // namespace

GrayImage decode_pgm(std::span<const std::uint8_t> bytes)
{
    PgmReader in(bytes);
    if (bytes.size() < 2) throw DecodeError("truncated", bytes.size(), "missing magic number");
    if (bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '2')) {
        throw DecodeError("malformed header", 0, "magic number is not P5 or P2");
    }
    const bool binary = bytes[1] == '5';
    in.byte();
    in.byte();
    if (!in.at_end() && !std::isspace(bytes[in.pos()]) && bytes[in.pos()] != '#') {
        throw DecodeError("malformed header", in.pos(), "expected whitespace after magic number");
    }

    const long width = in.read_uint("width");
    const long height = in.read_uint("height");
    in.skip_separators();
    const std::size_t maxval_pos = in.pos();
    const long maxval = in.read_uint("maxval");
    if (width < 1 || height < 1) throw DecodeError("malformed header", in.pos(), "zero image dimension");
    if (maxval < 1) throw DecodeError("malformed header", maxval_pos, "maxval must be >= 1");
    if (maxval > 255) {
        throw DecodeError("unsupported maxval", maxval_pos, "maxval " + std::to_string(maxval) + " exceeds 255");
    }

    const auto count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    std::vector<std::uint8_t> pixels;
    pixels.reserve(count);

    if (binary) {
        // Exactly one whitespace byte separates maxval from the raster.
        if (in.at_end()) throw DecodeError("truncated", in.pos(), "missing raster");
        if (!std::isspace(bytes[in.pos()])) {
            throw DecodeError("malformed header", in.pos(), "expected whitespace after maxval");
        }
        in.byte();
        if (in.remaining() < count) {
            throw DecodeError("truncated", bytes.size(),
                              "raster has " + std::to_string(in.remaining()) + " of " + std::to_string(count) +
                                  " bytes");
        }
        for (std::size_t i = 0; i < count; ++i) pixels.push_back(in.byte());
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            in.skip_separators();
            const std::size_t at = in.pos();
            const long v = in.read_uint("sample");
            if (v > maxval) {
                throw DecodeError("malformed raster", at, "sample " + std::to_string(v) + " exceeds maxval");
            }
            pixels.push_back(static_cast<std::uint8_t>(v));
        }
    }
    for (std::size_t i = 0; i < count && binary; ++i) {
        if (pixels[i] > maxval) {
            throw DecodeError("malformed raster", bytes.size() - count + i, "sample exceeds maxval");
        }
    }
    return GrayImage(static_cast<int>(width), static_cast<int>(height), std::move(pixels));
}

std::vector<std::uint8_t> encode_pgm(const GrayImage& image)
{
    const std::string header =
        "P5\n" + std::to_string(image.width()) + " " + std::to_string(image.height()) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.insert(out.end(), image.pixels().begin(), image.pixels().end());
    return out;
}

GrayImage read_pgm(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    return decode_pgm(bytes);
}

void write_pgm(const std::string& path, const GrayImage& image)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot write " + path);
    const auto bytes = encode_pgm(image);
    f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw IoError("write failed for " + path);
}

GrayImage crop(const GrayImage& image, const BBox& box)
{
    if (!image.contains(box)) throw BoundsError(box, image.width(), image.height());
    GrayImage out(box.w, box.h);
    for (int j = 0; j < box.h; ++j) {
        for (int i = 0; i < box.w; ++i) out.at(i, j) = image.at(box.x + i, box.y + j);
    }
    return out;
}

namespace {

// Source coordinate for destination index `d` under corner alignment. A single
// destination sample reads the source midpoint.
double source_coord(int d, int src_len, int dst_len)
{
    if (dst_len == 1) return (src_len - 1) / 2.0;
    return static_cast<double>(d) * (src_len - 1) / (dst_len - 1);
}

}  // namespace

GrayImage resize_bilinear(const GrayImage& image, int new_w, int new_h)
{
    if (new_w < 1 || new_h < 1) {
        throw InvalidArgument("resize target must be >= 1x1, got " + std::to_string(new_w) + "x" +
                              std::to_string(new_h));
    }
    GrayImage out(new_w, new_h);
    for (int y = 0; y < new_h; ++y) {
        const double sy = source_coord(y, image.height(), new_h);
        const int y0 = static_cast<int>(std::floor(sy));
        const int y1 = std::min(y0 + 1, image.height() - 1);
        const double fy = sy - y0;
        for (int x = 0; x < new_w; ++x) {
            const double sx = source_coord(x, image.width(), new_w);
            const int x0 = static_cast<int>(std::floor(sx));
            const int x1 = std::min(x0 + 1, image.width() - 1);
            const double fx = sx - x0;
            const double top = image.at(x0, y0) * (1.0 - fx) + image.at(x1, y0) * fx;
            const double bot = image.at(x0, y1) * (1.0 - fx) + image.at(x1, y1) * fx;
            const double v = top * (1.0 - fy) + bot * fy;
            out.at(x, y) = static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
        }
    }
    return out;
}

}  // namespace fer
