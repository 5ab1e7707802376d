#include "fer/cli.hpp"

#include "fer/dataio.hpp"
#include "fer/mlp.hpp"
#include "fer/pipeline.hpp"
#include "fer/synthetic.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

namespace fer::cli {

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::string fixed6(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::string expression_code(Expression e)
{
    static constexpr const char* codes[kExpressionCount] = {"SU", "NE", "SA", "DI", "FE", "HA", "AN"};
    return codes[static_cast<std::size_t>(e)];
}

// Raw flag values shared by every command that runs the image pipeline.
struct PipelineFlags {
    std::vector<int> clahe_tiles{8, 8};
    double clahe_clip = 2.0;
    int se_radius = 3;
    double resize_scale = 2.0;
    std::string threshold = "otsu";
    std::string polarity = "dark";
    bool regional_max = false;
    double susan_t = 27.0;
    double susan_g_frac = 0.75;
    double susan_radius = 3.4;
    bool susan_hard = false;
    double edge_thresh = 2.0;
    bool no_despeckle = false;
    long min_area = 0;
    double min_area_frac = 0.0005;
    std::string merge_axis = "x";
    bool no_normalize = false;
    std::vector<double> ul_margins{0.05, 0.45, 0.15, 0.55};
    std::vector<double> ur_margins{0.55, 0.95, 0.15, 0.55};
    std::vector<double> lower_margins{0.25, 0.75, 0.50, 0.95};

    void attach(CLI::App* app)
    {
        app->add_option("--clahe-tiles", clahe_tiles, "CLAHE tile grid X Y")->expected(2)->capture_default_str();
        app->add_option("--clahe-clip", clahe_clip, "CLAHE relative clip limit")->capture_default_str();
        app->add_option("--se-radius", se_radius, "disk structuring element radius")->capture_default_str();
        app->add_option("--resize-scale", resize_scale, "face crop enlargement factor")->capture_default_str();
        app->add_option("--threshold", threshold, "binarization level: otsu or 0-255")->capture_default_str();
        app->add_option("--polarity", polarity, "face polarity against background")
            ->check(CLI::IsMember({"dark", "light"}))
            ->capture_default_str();
        app->add_flag("--regional-max", regional_max, "add regional maxima to the reconstruction marker");
        app->add_option("--susan-t", susan_t, "SUSAN brightness threshold t")->capture_default_str();
        app->add_option("--susan-g-frac", susan_g_frac, "SUSAN geometric threshold fraction")->capture_default_str();
        app->add_option("--susan-radius", susan_radius, "SUSAN circular mask radius")->capture_default_str();
        app->add_flag("--susan-hard", susan_hard, "hard |dI| <= t similarity");
        app->add_option("--edge-thresh", edge_thresh, "edge strength threshold")->capture_default_str();
        app->add_flag("--no-despeckle", no_despeckle, "skip the 3x3 median pass on the edge mask");
        app->add_option("--min-area", min_area, "absolute minimum segment area P (0: relative)");
        app->add_option("--min-area-frac", min_area_frac, "minimum segment area as a fraction of the crop")
            ->capture_default_str();
        app->add_option("--merge-axis", merge_axis, "projection used by the overlap merge")
            ->check(CLI::IsMember({"x", "y"}))
            ->capture_default_str();
        app->add_flag("--no-normalize", no_normalize, "keep raw pixel features");
        app->add_option("--upper-left-margins", ul_margins, "x0 x1 y0 y1")->expected(4);
        app->add_option("--upper-right-margins", ur_margins, "x0 x1 y0 y1")->expected(4);
        app->add_option("--lower-margins", lower_margins, "x0 x1 y0 y1")->expected(4);
    }

    PipelineParams build() const
    {
        PipelineParams p;
        p.localize.clahe.tiles_x = clahe_tiles.at(0);
        p.localize.clahe.tiles_y = clahe_tiles.at(1);
        p.localize.clahe.clip_limit = clahe_clip;
        p.localize.se_radius = se_radius;
        p.localize.resize_scale = resize_scale;
        if (threshold != "otsu") {
            int level = -1;
            const auto res = std::from_chars(threshold.data(), threshold.data() + threshold.size(), level);
            if (res.ec != std::errc() || res.ptr != threshold.data() + threshold.size() || level < 0 || level > 255) {
                throw UsageError("--threshold must be 'otsu' or an integer 0-255");
            }
            p.localize.threshold = level;
        }
        p.localize.polarity = polarity == "light" ? Polarity::light : Polarity::dark;
        p.localize.regional_max_marker = regional_max;
        p.susan.brightness_t = susan_t;
        p.susan.geometric_fraction = susan_g_frac;
        p.susan.mask_radius = susan_radius;
        p.susan.hard_similarity = susan_hard;
        p.extract.edge_threshold = edge_thresh;
        p.extract.despeckle = !no_despeckle;
        if (min_area > 0) p.extract.min_area = min_area;
        p.extract.min_area_fraction = min_area_frac;
        p.extract.merge_axis = merge_axis == "y" ? MergeAxis::y : MergeAxis::x;
        p.extract.normalize = !no_normalize;
        const auto rect = [](const std::vector<double>& v) { return NormRect{v.at(0), v.at(1), v.at(2), v.at(3)}; };
        p.extract.upper_left_margins = rect(ul_margins);
        p.extract.upper_right_margins = rect(ur_margins);
        p.extract.lower_margins = rect(lower_margins);
        p.localize.validate();
        p.susan.validate();
        p.extract.validate();
        return p;
    }
};

struct TrainFlags {
    double lr = 0.5;
    int epochs = 10000;
    double goal_mse = 0.001;
    std::uint64_t seed = 1;
    bool no_shuffle = false;
    double momentum = 0.0;
    double target_smoothing = 0.0;
    std::vector<int> hidden{15, 7};

    void attach(CLI::App* app)
    {
        app->add_option("--lr", lr, "learning rate")->capture_default_str();
        app->add_option("--epochs", epochs, "maximum epochs")->capture_default_str();
        app->add_option("--goal-mse", goal_mse, "stop once the epoch loss reaches this value")->capture_default_str();
        app->add_option("--seed", seed, "initialization and shuffling seed")->capture_default_str();
        app->add_flag("--no-shuffle", no_shuffle, "visit samples in file order");
        app->add_option("--momentum", momentum, "momentum coefficient")->capture_default_str();
        app->add_option("--target-smoothing", target_smoothing, "targets become (1-s, s)")->capture_default_str();
        app->add_option("--hidden", hidden, "hidden layer sizes")->capture_default_str();
    }

    TrainConfig config() const
    {
        TrainConfig c;
        c.learning_rate = lr;
        c.max_epochs = epochs;
        c.goal_mse = goal_mse;
        c.seed = seed;
        c.shuffle = !no_shuffle;
        c.momentum = momentum;
        c.target_smoothing = target_smoothing;
        c.validate();
        return c;
    }

    std::vector<int> dims() const
    {
        std::vector<int> d{static_cast<int>(kFeatureCount)};
        d.insert(d.end(), hidden.begin(), hidden.end());
        d.push_back(static_cast<int>(kExpressionCount));
        return d;
    }
};

std::vector<LabeledSample> labeled_samples(const std::vector<FeatureRow>& rows)
{
    if (rows.empty()) throw DataError("empty", 1, "feature file has no rows");
    std::vector<LabeledSample> out;
    out.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!rows[i].label) throw DataError("unlabelled row", i + 2, "row has no label");
        out.push_back({rows[i].features, *rows[i].label});
    }
    return out;
}

std::string prediction_line(const Prediction& p)
{
    std::string line(expression_name(p.label));
    for (double s : p.scores) line += " " + fixed6(s);
    return line;
}

FeatureVector parse_row_values(const std::string& text)
{
    std::vector<std::string_view> toks;
    std::string_view rest(text);
    while (true) {
        const auto pos = rest.find(',');
        toks.push_back(trim(rest.substr(0, pos)));
        if (pos == std::string_view::npos) break;
        rest.remove_prefix(pos + 1);
    }
    if (toks.size() == kFeatureCount + 1 && (toks.back().empty() || parse_expression(toks.back()))) toks.pop_back();
    if (toks.size() != kFeatureCount) {
        throw UsageError("--row needs " + std::to_string(kFeatureCount) + " comma-separated values");
    }
    FeatureVector v;
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
        const auto res = std::from_chars(toks[i].data(), toks[i].data() + toks[i].size(), v[i]);
        if (res.ec != std::errc() || res.ptr != toks[i].data() + toks[i].size()) {
            throw UsageError("bad --row value '" + std::string(toks[i]) + "'");
        }
    }
    return v;
}

// ---- subcommands -------------------------------------------------------

struct ExtractCmd {
    PipelineFlags pipeline;
    std::vector<std::string> images;
    std::string manifest;
    std::string output;
    std::string skip_log;

    void attach(CLI::App* app)
    {
        pipeline.attach(app);
        app->add_option("images", images, "PGM images labelled by filename convention");
        app->add_option("--manifest", manifest, "path,label manifest (overrides filename labels)");
        app->add_option("-o,--output", output, "feature file to write")->required();
        app->add_option("--skip-log", skip_log, "where to record skipped images (default: stderr)");
    }

    int run(std::ostream& out, std::ostream& err)
    {
        if (images.empty() && manifest.empty()) throw UsageError("extract needs image paths or --manifest");
        const PipelineParams params = pipeline.build();

        DatasetManifest m = manifest.empty() ? manifest_from_paths(images) : load_manifest(manifest);
        if (!manifest.empty() && !images.empty()) {
            // Images given alongside a manifest take their labels from it when listed.
            DatasetManifest extra = manifest_from_paths(images);
            for (auto& e : extra.entries) {
                const bool listed = std::any_of(m.entries.begin(), m.entries.end(),
                                                [&](const ManifestEntry& x) { return x.image_path == e.image_path; });
                if (!listed) m.entries.push_back(e);
            }
        }

        std::vector<FeatureRow> rows;
        std::string skipped = "path,error,message\n";
        std::size_t skip_count = 0;
        for (const auto& entry : m.entries) {
            try {
                const auto analysis = analyze_face(read_pgm(entry.image_path), params);
                rows.push_back({analysis.result.vector, entry.label});
            } catch (const Error& e) {
                ++skip_count;
                skipped += entry.image_path + "," + e.kind() + "," + e.what() + "\n";
            }
        }
        if (skip_log.empty()) {
            if (skip_count) err << skipped;
        } else {
            write_text_file(skip_log, skipped);
        }
        if (rows.empty()) {
            err << "extract: no feature rows produced from " << m.entries.size() << " images\n";
            return kExitDomainError;
        }
        write_text_file(output, write_features(rows));
        out << "extracted " << rows.size() << " of " << m.entries.size() << " images, skipped " << skip_count << "\n";
        return kExitOk;
    }
};

struct TrainCmd {
    TrainFlags flags;
    std::string features;
    std::string model_out;
    std::string history_out;

    void attach(CLI::App* app)
    {
        flags.attach(app);
        app->add_option("features", features, "labelled feature file")->required();
        app->add_option("-m,--model-out", model_out, "model file to write")->required();
        app->add_option("--history-out", history_out, "epoch,mse history (default: <model-out>.history.csv)");
    }

    int run(std::ostream& out, std::ostream&)
    {
        const TrainConfig config = flags.config();
        const auto samples = labeled_samples(read_features(read_text_file(features)));
        const auto result = train(init_model(config.seed, flags.dims()), samples, config);
        write_model_file(model_out, result.model);

        std::string history = "epoch,mse\n";
        char buf[64];
        for (std::size_t e = 0; e < result.loss_history.size(); ++e) {
            const auto res = std::to_chars(buf, buf + sizeof buf, result.loss_history[e], std::chars_format::general, 17);
            history += std::to_string(e + 1) + "," + std::string(buf, res.ptr) + "\n";
        }
        write_text_file(history_out.empty() ? model_out + ".history.csv" : history_out, history);

        out << "trained " << samples.size() << " samples for " << result.loss_history.size() << " epochs, final mse "
            << result.loss_history.back() << (result.loss_history.back() <= config.goal_mse ? " (goal reached)" : "")
            << "\n";
        return kExitOk;
    }
};

struct PredictCmd {
    PipelineFlags pipeline;
    std::string model;
    std::string image;
    std::string row;
    std::string features;

    void attach(CLI::App* app)
    {
        pipeline.attach(app);
        app->add_option("-m,--model", model, "model file")->required();
        auto* img = app->add_option("--image", image, "PGM image to classify");
        auto* r = app->add_option("--row", row, "15 comma-separated feature values");
        auto* f = app->add_option("--features", features, "feature file; one prediction per row");
        img->excludes(r)->excludes(f);
        r->excludes(f);
    }

    int run(std::ostream& out, std::ostream&)
    {
        if (image.empty() && row.empty() && features.empty()) {
            throw UsageError("predict needs --image, --row or --features");
        }
        const MlpModel m = read_model_file(model);
        if (!image.empty()) {
            const auto analysis = analyze_face(read_pgm(image), pipeline.build());
            out << prediction_line(predict(m, analysis.result.vector)) << "\n";
        } else if (!row.empty()) {
            out << prediction_line(predict(m, parse_row_values(row))) << "\n";
        } else {
            for (const auto& r : read_features(read_text_file(features))) {
                out << prediction_line(predict(m, r.features)) << "\n";
            }
        }
        return kExitOk;
    }
};

struct EvaluateCmd {
    std::string model;
    std::string features;

    void attach(CLI::App* app)
    {
        app->add_option("-m,--model", model, "model file")->required();
        app->add_option("features", features, "labelled feature file")->required();
    }

    int run(std::ostream& out, std::ostream&)
    {
        const MlpModel m = read_model_file(model);
        const auto samples = labeled_samples(read_features(read_text_file(features)));
        std::array<std::array<int, kExpressionCount>, kExpressionCount> confusion{};
        int correct = 0;
        for (const auto& s : samples) {
            const auto p = predict(m, s.features);
            ++confusion[static_cast<std::size_t>(s.label)][static_cast<std::size_t>(p.label)];
            if (p.label == s.label) ++correct;
        }
        const double accuracy = static_cast<double>(correct) / static_cast<double>(samples.size());
        out << "images_tested " << samples.size() << "\n";
        out << "correct " << correct << "\n";
        out << "accuracy " << fixed6(accuracy) << "\n";
        out << "accuracy_percent " << fixed6(100.0 * accuracy) << "\n";
        out << "confusion (rows: true, columns: predicted)\n";
        out << "true\\pred";
        for (auto n : expression_names()) out << " " << n;
        out << "\n";
        for (std::size_t t = 0; t < kExpressionCount; ++t) {
            out << expression_names()[t];
            for (std::size_t p = 0; p < kExpressionCount; ++p) out << " " << confusion[t][p];
            out << "\n";
        }
        return kExitOk;
    }
};

struct AnnotateCmd {
    PipelineFlags pipeline;
    std::string image;
    std::string output;

    void attach(CLI::App* app)
    {
        pipeline.attach(app);
        app->add_option("image", image, "PGM image")->required();
        app->add_option("-o,--output", output, "annotated PGM to write")->required();
    }

    int run(std::ostream& out, std::ostream&)
    {
        const auto analysis = analyze_face(read_pgm(image), pipeline.build());
        write_pgm(output, annotate(analysis.crop, analysis.result.features));
        const auto names = std::array<const char*, 6>{"left_eyebrow", "left_eye", "right_eyebrow",
                                                      "right_eye",    "nose",     "mouth"};
        const auto boxes = analysis.result.features.boxes();
        out << "face " << to_string(analysis.face) << "\n";
        for (std::size_t k = 0; k < boxes.size(); ++k) out << names[k] << " " << to_string(boxes[k]) << "\n";
        return kExitOk;
    }
};

struct GenSyntheticCmd {
    std::string out_dir;
    int count = 140;
    std::uint64_t seed = 1;
    int noise = SyntheticOptions{}.noise;
    double jitter = SyntheticOptions{}.jitter;
    std::vector<int> size{SyntheticOptions{}.width, SyntheticOptions{}.height};
    std::vector<int> offset{0, 0};
    std::string prefix = "SYN";

    void attach(CLI::App* app)
    {
        app->add_option("-o,--out-dir", out_dir, "directory for images, manifest.csv and truth.csv")->required();
        app->add_option("-n,--count", count, "number of faces, expressions assigned round-robin")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        app->add_option("--seed", seed, "generator seed")->capture_default_str();
        app->add_option("--noise", noise, "per-pixel noise amplitude")->check(CLI::Range(0, 64))->capture_default_str();
        app->add_option("--jitter", jitter, "geometry perturbation scale")->check(CLI::Range(0.0, 3.0))->capture_default_str();
        app->add_option("--size", size, "image width and height")->expected(2)->capture_default_str();
        app->add_option("--offset", offset, "translate every face by DX DY")->expected(2)->allow_extra_args(false);
        app->add_option("--prefix", prefix, "subject token of generated file names")->capture_default_str();
    }

    int run(std::ostream& out, std::ostream&)
    {
        if (prefix.empty() || prefix.find_first_of("./\\,") != std::string::npos) {
            throw UsageError("--prefix must be non-empty without '.', ',' or path separators");
        }
        SyntheticOptions opt;
        opt.width = size.at(0);
        opt.height = size.at(1);
        opt.noise = noise;
        opt.jitter = jitter;
        if (opt.width < 32 || opt.height < 32) throw UsageError("--size must be at least 32x32");

        std::filesystem::create_directories(out_dir);
        DatasetManifest manifest;
        manifest.source = ManifestSource::manifest_file;
        std::string truth = "path,label,face,left_eyebrow,left_eye,right_eyebrow,right_eye,nose,mouth\n";
        const auto box_text = [](const BBox& b) {
            return std::to_string(b.x) + " " + std::to_string(b.y) + " " + std::to_string(b.w) + " " +
                   std::to_string(b.h);
        };
        for (int i = 0; i < count; ++i) {
            const auto label = static_cast<Expression>(i % static_cast<int>(kExpressionCount));
            const std::uint64_t face_seed = seed * 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(i);
            const auto face = generate_face(label, face_seed, opt, {offset.at(0), offset.at(1)});
            char name[96];
            std::snprintf(name, sizeof name, "%s.%s1.%d.pgm", prefix.c_str(), expression_code(label).c_str(), i);
            write_pgm((std::filesystem::path(out_dir) / name).string(), face.image);
            manifest.entries.push_back({name, label});
            truth += std::string(name) + "," + std::string(expression_name(label)) + "," + box_text(face.face);
            for (const auto& b : face.features) truth += "," + box_text(b);
            truth += "\n";
        }
        write_text_file((std::filesystem::path(out_dir) / "manifest.csv").string(), format_manifest(manifest));
        write_text_file((std::filesystem::path(out_dir) / "truth.csv").string(), truth);
        out << "wrote " << count << " faces to " << out_dir << "\n";
        return kExitOk;
    }
};

// Inserts `--key value` tokens from the config file ahead of the user's own
// tokens; every option keeps its last value, so explicit flags win.
std::vector<std::string> with_config(CLI::App& app, const std::vector<std::string>& args)
{
    std::vector<std::string> rest;
    std::string config_path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw UsageError("--config needs a file");
            config_path = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            config_path = args[i].substr(9);
        } else {
            rest.push_back(args[i]);
        }
    }
    if (config_path.empty() || rest.empty()) return rest;

    CLI::App* sub = nullptr;
    try {
        sub = app.get_subcommand(rest.front());
    } catch (const CLI::OptionNotFound&) {
        throw UsageError("unknown subcommand '" + rest.front() + "'");
    }
    std::vector<std::string> merged{rest.front()};
    for (const auto& [key, value] : parse_config(read_text_file(config_path))) {
        const CLI::Option* opt = sub->get_option_no_throw("--" + key);
        if (!opt) throw UsageError("config key '" + key + "' is not an option of " + rest.front());
        if (opt->get_expected_min() == 0) {
            if (value == "true" || value == "1" || value == "yes") merged.push_back("--" + key);
            continue;
        }
        merged.push_back("--" + key);
        std::istringstream vs(value);
        for (std::string tok; vs >> tok;) merged.push_back(tok);
    }
    merged.insert(merged.end(), rest.begin() + 1, rest.end());
    return merged;
}

}  // namespace

std::map<std::string, std::string> parse_config(std::string_view text)
{
    std::map<std::string, std::string> out;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto end = text.find('\n', start);
        auto line = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
        ++line_no;
        start = end == std::string_view::npos ? text.size() + 1 : end + 1;
        const auto hash = line.find('#');
        if (hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw DataError("malformed row", line_no, "config line lacks '='");
        auto key = trim(line.substr(0, eq));
        if (key.rfind("--", 0) == 0) key.remove_prefix(2);
        if (key.empty()) throw DataError("malformed row", line_no, "config line has an empty key");
        out[std::string(key)] = std::string(trim(line.substr(eq + 1)));
    }
    return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Facial feature extraction and expression recognition"};
    app.name("fer");
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.add_option("--config", "key=value file; explicit flags take precedence");

    ExtractCmd extract_cmd;
    TrainCmd train_cmd;
    PredictCmd predict_cmd;
    EvaluateCmd evaluate_cmd;
    AnnotateCmd annotate_cmd;
    GenSyntheticCmd gen_cmd;
    auto* extract_app = app.add_subcommand("extract", "extract feature vectors from face images");
    auto* train_app = app.add_subcommand("train", "train the classifier on a labelled feature file");
    auto* predict_app = app.add_subcommand("predict", "classify an image or feature row");
    auto* evaluate_app = app.add_subcommand("evaluate", "accuracy and confusion matrix on a labelled feature file");
    auto* annotate_app = app.add_subcommand("annotate", "write the face crop with feature boxes drawn in");
    auto* gen_app = app.add_subcommand("gen-synthetic", "generate schematic labelled faces");
    extract_cmd.attach(extract_app);
    train_cmd.attach(train_app);
    predict_cmd.attach(predict_app);
    evaluate_cmd.attach(evaluate_app);
    annotate_cmd.attach(annotate_app);
    gen_cmd.attach(gen_app);

    try {
        auto tokens = with_config(app, args);
        std::reverse(tokens.begin(), tokens.end());
        app.parse(tokens);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        err << "error (" << e.kind() << "): " << e.what() << "\n";
        return kExitDomainError;
    }

    try {
        if (extract_app->parsed()) return extract_cmd.run(out, err);
        if (train_app->parsed()) return train_cmd.run(out, err);
        if (predict_app->parsed()) return predict_cmd.run(out, err);
        if (evaluate_app->parsed()) return evaluate_cmd.run(out, err);
        if (annotate_app->parsed()) return annotate_cmd.run(out, err);
        if (gen_app->parsed()) return gen_cmd.run(out, err);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const InvalidArgument& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        err << "error (" << e.kind() << "): " << e.what() << "\n";
        return kExitDomainError;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error (io): " << e.what() << "\n";
        return kExitDomainError;
    }
    return kExitUsage;
}

}  // namespace fer::cli
