#ifndef FER_DATAIO_HPP
#define FER_DATAIO_HPP

#include "fer/features.hpp"
#include "fer/mlp.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fer {

/// JAFFE-style names `SUBJ.CCn.NN.ext` carry a two-letter expression code
/// (AN, DI, FE, HA, NE, SA, SU). Anything else yields nullopt.
std::optional<Expression> label_from_filename(std::string_view name);

struct ManifestEntry {
    std::string image_path;
    std::optional<Expression> label;
};

enum class ManifestSource { filename_convention, manifest_file };

struct DatasetManifest {
    std::vector<ManifestEntry> entries;
    ManifestSource source = ManifestSource::filename_convention;
};

/// Parses a `path,label` manifest with header line. Relative image paths are
/// resolved against `base_dir`. An empty label falls back to the filename convention.
DatasetManifest parse_manifest(std::string_view text, const std::string& base_dir = "");
DatasetManifest load_manifest(const std::string& path);

/// Labels every path by the filename convention. Throws DataError on duplicates.
DatasetManifest manifest_from_paths(const std::vector<std::string>& paths);

std::string format_manifest(const DatasetManifest& manifest);

struct FeatureRow {
    FeatureVector features;
    std::optional<Expression> label;

    friend bool operator==(const FeatureRow&, const FeatureRow&) = default;
};

/// Header `h1,...,d3,label`; reals at 17 significant digits, empty label for unlabelled rows.
std::string write_features(const std::vector<FeatureRow>& rows);
/// Accepts the header with or without the trailing label column.
std::vector<FeatureRow> read_features(std::string_view text);

std::string feature_header(bool with_label = true);
std::string format_feature_row(const FeatureRow& row);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

}  // namespace fer

#endif  // FER_DATAIO_HPP
