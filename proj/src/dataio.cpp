#include "fer/dataio.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace fer {

namespace {

std::vector<std::string_view> split(std::string_view line, char sep)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> lines_of(std::string_view text)
{
    auto lines = split(text, '\n');
    if (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
    return lines;
}

}  // namespace

std::optional<Expression> label_from_filename(std::string_view name)
{
    const auto slash = name.find_last_of("/\\");
    if (slash != std::string_view::npos) name.remove_prefix(slash + 1);
    const auto parts = split(name, '.');
    if (parts.size() < 4 || parts[0].empty()) return std::nullopt;
    const auto code = parts[1];
    if (code.size() < 2) return std::nullopt;
    for (std::size_t i = 2; i < code.size(); ++i) {
        if (code[i] < '0' || code[i] > '9') return std::nullopt;
    }
    for (char c : parts[2]) {
        if (c < '0' || c > '9') return std::nullopt;
    }
    static constexpr std::pair<std::string_view, Expression> table[] = {
        {"AN", Expression::angry}, {"DI", Expression::disgust}, {"FE", Expression::fear},
        {"HA", Expression::happy}, {"NE", Expression::neutral}, {"SA", Expression::sad},
        {"SU", Expression::surprise}};
    for (const auto& [key, label] : table) {
        if (code.substr(0, 2) == key) return label;
    }
    return std::nullopt;
}

DatasetManifest parse_manifest(std::string_view text, const std::string& base_dir)
{
    DatasetManifest m;
    m.source = ManifestSource::manifest_file;
    const auto lines = lines_of(text);
    if (lines.empty() || trim(lines[0]) != "path,label") {
        throw DataError("malformed row", 1, "manifest header must be 'path,label'");
    }
    std::set<std::string> seen;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::size_t line_no = i + 1;
        const auto line = trim(lines[i]);
        if (line.empty()) continue;
        const auto cols = split(line, ',');
        if (cols.size() != 2 || trim(cols[0]).empty()) {
            throw DataError("malformed row", line_no, "expected 'path,label'");
        }
        std::string path(trim(cols[0]));
        if (!base_dir.empty() && std::filesystem::path(path).is_relative()) {
            path = (std::filesystem::path(base_dir) / path).lexically_normal().string();
        }
        if (!seen.insert(path).second) throw DataError("duplicate path", line_no, "duplicate image path " + path);

        const auto token = trim(cols[1]);
        std::optional<Expression> label;
        if (token.empty()) {
            label = label_from_filename(path);
        } else {
            label = parse_expression(token);
            if (!label) throw DataError("unknown label", line_no, "unknown label '" + std::string(token) + "'");
        }
        m.entries.push_back({std::move(path), label});
    }
    return m;
}

DatasetManifest load_manifest(const std::string& path)
{
    const auto dir = std::filesystem::path(path).parent_path().string();
    return parse_manifest(read_text_file(path), dir);
}

DatasetManifest manifest_from_paths(const std::vector<std::string>& paths)
{
    DatasetManifest m;
    m.source = ManifestSource::filename_convention;
    std::set<std::string> seen;
    for (std::size_t i = 0; i < paths.size(); ++i) {
        if (!seen.insert(paths[i]).second) throw DataError("duplicate path", i + 1, "duplicate image path " + paths[i]);
        m.entries.push_back({paths[i], label_from_filename(paths[i])});
    }
    return m;
}

std::string format_manifest(const DatasetManifest& manifest)
{
    std::string out = "path,label\n";
    for (const auto& e : manifest.entries) {
        out += e.image_path;
        out += ',';
        if (e.label) out += expression_name(*e.label);
        out += '\n';
    }
    return out;
}

std::string feature_header(bool with_label)
{
    std::string out;
    for (const auto name : feature_names()) {
        if (!out.empty()) out += ',';
        out += name;
    }
    if (with_label) out += ",label";
    return out;
}

std::string format_feature_row(const FeatureRow& row)
{
    std::string out;
    char buf[64];
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
        const auto res = std::to_chars(buf, buf + sizeof buf, row.features[i], std::chars_format::general, 17);
        out.append(buf, res.ptr);
        out += ',';
    }
    if (row.label) out += expression_name(*row.label);
    return out;
}

std::string write_features(const std::vector<FeatureRow>& rows)
{
    std::string out = feature_header(true) + "\n";
    for (const auto& r : rows) out += format_feature_row(r) + "\n";
    return out;
}

std::vector<FeatureRow> read_features(std::string_view text)
{
    const auto lines = lines_of(text);
    if (lines.empty()) throw DataError("malformed row", 1, "feature file has no header");
    const auto header = trim(lines[0]);
    bool has_label;
    if (header == feature_header(true)) {
        has_label = true;
    } else if (header == feature_header(false)) {
        has_label = false;
    } else {
        throw DataError("malformed row", 1, "unexpected feature header '" + std::string(header) + "'");
    }

    std::vector<FeatureRow> rows;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::size_t line_no = i + 1;
        const auto line = trim(lines[i]);
        if (line.empty()) continue;
        const auto cols = split(line, ',');
        const std::size_t expected = kFeatureCount + (has_label ? 1 : 0);
        if (cols.size() != expected) {
            throw DataError("malformed row", line_no,
                            "expected " + std::to_string(expected) + " columns, got " + std::to_string(cols.size()));
        }
        FeatureRow row;
        for (std::size_t k = 0; k < kFeatureCount; ++k) {
            const auto tok = trim(cols[k]);
            double v = 0;
            const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
            if (res.ec != std::errc() || res.ptr != tok.data() + tok.size() || !std::isfinite(v)) {
                throw DataError("malformed row", line_no, "bad value '" + std::string(tok) + "' in column " +
                                                              std::string(feature_names()[k]));
            }
            row.features[k] = v;
        }
        if (has_label) {
            const auto tok = trim(cols[kFeatureCount]);
            if (!tok.empty()) {
                row.label = parse_expression(tok);
                if (!row.label) throw DataError("unknown label", line_no, "unknown label '" + std::string(tok) + "'");
            }
        }
        rows.push_back(row);
    }
    return rows;
}

std::string read_text_file(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, std::string_view text)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot write " + path);
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!f) throw IoError("write failed for " + path);
}

}  // namespace fer
