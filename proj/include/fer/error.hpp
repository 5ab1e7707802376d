#ifndef FER_ERROR_HPP
#define FER_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fer {

/// Base class for every domain error raised by the library. `kind()` is a
/// short stable token used by the CLI skip log and exit-code mapping.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& what) : Error("invalid argument", what) {}
};

/// PGM decoding failure. `offset()` is the byte offset where parsing stopped.
class DecodeError : public Error {
public:
    DecodeError(std::string kind, std::size_t offset, const std::string& what)
        : Error(std::move(kind), what + " at byte " + std::to_string(offset)), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

class NoFaceFound : public Error {
public:
    explicit NoFaceFound(const std::string& what) : Error("no face found", what) {}
};

/// A region of the face crop did not produce exactly two feature segments.
class FeatureCountError : public Error {
public:
    FeatureCountError(std::string region, std::size_t count)
        : Error("feature count", "region " + region + " yielded " + std::to_string(count) +
                                     " segments, expected 2"),
          region_(std::move(region)), count_(count) {}

    const std::string& region() const noexcept { return region_; }
    std::size_t count() const noexcept { return count_; }

private:
    std::string region_;
    std::size_t count_;
};

// Model file errors.
class VersionError : public Error {
public:
    explicit VersionError(const std::string& what) : Error("model version", what) {}
};

class ShapeError : public Error {
public:
    explicit ShapeError(const std::string& what) : Error("model shape", what) {}
};

class ParseError : public Error {
public:
    explicit ParseError(const std::string& what) : Error("parse", what) {}
};

/// Text-file data error carrying the 1-based line number it refers to.
class DataError : public Error {
public:
    DataError(std::string kind, std::size_t line, const std::string& what)
        : Error(std::move(kind), "line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error("io", what) {}
};

}  // namespace fer

#endif  // FER_ERROR_HPP
