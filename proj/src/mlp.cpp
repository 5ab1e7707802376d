#include "fer/mlp.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

namespace fer {

namespace {

constexpr std::string_view kMagic = "fer-mlp 1";

double uniform01(std::mt19937_64& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Unbiased integer in [0, bound) by rejection.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound)
{
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t v;
    do {
        v = rng();
    } while (v >= limit);
    return v % bound;
}

}  // namespace

const std::array<std::string_view, kExpressionCount>& expression_names()
{
    static constexpr std::array<std::string_view, kExpressionCount> names = {
        "surprise", "neutral", "sad", "disgust", "fear", "happy", "angry"};
    return names;
}

std::string_view expression_name(Expression e)
{
    return expression_names()[static_cast<std::size_t>(e)];
}

std::optional<Expression> parse_expression(std::string_view name)
{
    const auto& names = expression_names();
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == name) return static_cast<Expression>(i);
    }
    return std::nullopt;
}

MlpModel MlpModel::zeros(const std::vector<int>& dims)
{
    if (dims.size() < 2) throw ShapeError("a network needs at least two layers");
    for (int d : dims) {
        if (d < 1) throw ShapeError("layer sizes must be >= 1");
    }
    MlpModel m;
    m.layer_dims = dims;
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
        m.weights.emplace_back(dims[l + 1], dims[l]);
        m.biases.emplace_back(static_cast<std::size_t>(dims[l + 1]), 0.0);
    }
    return m;
}

void MlpModel::validate() const
{
    if (layer_dims.size() < 2) throw ShapeError("a network needs at least two layers");
    if (weights.size() != layer_dims.size() - 1 || biases.size() != weights.size()) {
        throw ShapeError("layer count does not match dims");
    }
    for (std::size_t l = 0; l < weights.size(); ++l) {
        const auto& w = weights[l];
        if (w.rows != layer_dims[l + 1] || w.cols != layer_dims[l] ||
            w.data.size() != static_cast<std::size_t>(w.rows) * w.cols ||
            biases[l].size() != static_cast<std::size_t>(layer_dims[l + 1])) {
            throw ShapeError("layer " + std::to_string(l) + " shape does not match dims");
        }
        for (double v : w.data) {
            if (!std::isfinite(v)) throw ParseError("non-finite weight in layer " + std::to_string(l));
        }
        for (double v : biases[l]) {
            if (!std::isfinite(v)) throw ParseError("non-finite bias in layer " + std::to_string(l));
        }
    }
}

void TrainConfig::validate() const
{
    if (!(learning_rate >= 0) || !std::isfinite(learning_rate)) throw InvalidArgument("learning rate must be >= 0");
    if (max_epochs < 1) throw InvalidArgument("max_epochs must be >= 1");
    if (!(goal_mse >= 0)) throw InvalidArgument("goal_mse must be >= 0");
    if (!(momentum >= 0 && momentum < 1)) throw InvalidArgument("momentum must lie in [0, 1)");
    if (!(target_smoothing >= 0 && target_smoothing < 0.5)) throw InvalidArgument("target smoothing must lie in [0, 0.5)");
}

MlpModel init_model(std::uint64_t seed, const std::vector<int>& dims)
{
    MlpModel m = MlpModel::zeros(dims);
    std::mt19937_64 rng(seed);
    for (std::size_t l = 0; l < m.weights.size(); ++l) {
        for (double& w : m.weights[l].data) w = uniform01(rng) - 0.5;
        for (double& b : m.biases[l]) b = uniform01(rng) - 0.5;
    }
    return m;
}

double sigmoid(double z)
{
    return 1.0 / (1.0 + std::exp(-z));
}

ForwardPass forward(const MlpModel& model, std::span<const double> input)
{
    if (input.size() != static_cast<std::size_t>(model.inputs())) {
        throw InvalidArgument("input has " + std::to_string(input.size()) + " values, network expects " +
                              std::to_string(model.inputs()));
    }
    for (double v : input) {
        if (!std::isfinite(v)) throw InvalidArgument("non-finite network input");
    }
    ForwardPass pass;
    pass.activations.emplace_back(input.begin(), input.end());
    for (std::size_t l = 0; l < model.layers(); ++l) {
        const auto& w = model.weights[l];
        const auto& prev = pass.activations.back();
        std::vector<double> next(static_cast<std::size_t>(w.rows));
        for (int r = 0; r < w.rows; ++r) {
            double z = model.biases[l][r];
            for (int c = 0; c < w.cols; ++c) z += w(r, c) * prev[c];
            next[r] = sigmoid(z);
        }
        pass.activations.push_back(std::move(next));
    }
    return pass;
}

ForwardPass forward(const MlpModel& model, const FeatureVector& x)
{
    return forward(model, std::span<const double>(x.values));
}

namespace {

double half_squared_error(std::span<const double> y, std::span<const double> t)
{
    double e = 0;
    for (std::size_t i = 0; i < y.size(); ++i) e += (y[i] - t[i]) * (y[i] - t[i]);
    return 0.5 * e;
}

void check_target(const MlpModel& model, std::span<const double> target)
{
    if (target.size() != static_cast<std::size_t>(model.outputs())) {
        throw InvalidArgument("target size does not match network output");
    }
}

Gradients gradients_from(const MlpModel& model, const ForwardPass& pass, std::span<const double> target)
{
    const std::size_t L = model.layers();
    Gradients g;
    g.weights.resize(L);
    g.biases.resize(L);

    // delta of the output layer: (y - t) * y * (1 - y)
    std::vector<double> delta(pass.output().size());
    for (std::size_t i = 0; i < delta.size(); ++i) {
        const double y = pass.output()[i];
        delta[i] = (y - target[i]) * y * (1.0 - y);
    }
    for (std::size_t l = L; l-- > 0;) {
        const auto& w = model.weights[l];
        const auto& a_prev = pass.activations[l];
        Matrix gw(w.rows, w.cols);
        for (int r = 0; r < w.rows; ++r) {
            for (int c = 0; c < w.cols; ++c) gw(r, c) = delta[r] * a_prev[c];
        }
        g.weights[l] = std::move(gw);
        g.biases[l] = delta;
        if (l == 0) break;
        std::vector<double> prev_delta(static_cast<std::size_t>(w.cols), 0.0);
        for (int c = 0; c < w.cols; ++c) {
            double s = 0;
            for (int r = 0; r < w.rows; ++r) s += w(r, c) * delta[r];
            prev_delta[c] = s * a_prev[c] * (1.0 - a_prev[c]);
        }
        delta = std::move(prev_delta);
    }
    return g;
}

}  // namespace

double sample_loss(const MlpModel& model, std::span<const double> input, std::span<const double> target)
{
    check_target(model, target);
    return half_squared_error(forward(model, input).output(), target);
}

Gradients backprop_gradients(const MlpModel& model, std::span<const double> input, std::span<const double> target)
{
    check_target(model, target);
    return gradients_from(model, forward(model, input), target);
}

std::vector<double> target_vector(Expression label, double smoothing)
{
    std::vector<double> t(kExpressionCount, smoothing);
    t[static_cast<std::size_t>(label)] = 1.0 - smoothing;
    return t;
}

std::vector<std::size_t> epoch_order(std::size_t n, const TrainConfig& config, int epoch)
{
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    if (!config.shuffle || n < 2) return order;
    std::mt19937_64 rng(config.seed + static_cast<std::uint64_t>(epoch));
    for (std::size_t i = n - 1; i > 0; --i) {
        const auto j = static_cast<std::size_t>(uniform_below(rng, i + 1));
        std::swap(order[i], order[j]);
    }
    return order;
}

double backprop_epoch(MlpModel& model, std::span<const LabeledSample> data, const TrainConfig& config, int epoch,
                      MomentumState* momentum)
{
    config.validate();
    if (data.empty()) throw InvalidArgument("training data is empty");
    if (model.outputs() != static_cast<int>(kExpressionCount)) {
        throw ShapeError("labelled training needs " + std::to_string(kExpressionCount) + " outputs");
    }

    MomentumState local;
    MomentumState* state = momentum ? momentum : &local;
    if (config.momentum > 0 && state->weights.size() != model.layers()) {
        state->weights.clear();
        state->biases.clear();
        for (std::size_t l = 0; l < model.layers(); ++l) {
            state->weights.emplace_back(model.weights[l].rows, model.weights[l].cols);
            state->biases.emplace_back(model.biases[l].size(), 0.0);
        }
    }

    double total = 0;
    for (std::size_t idx : epoch_order(data.size(), config, epoch)) {
        const auto& sample = data[idx];
        const auto target = target_vector(sample.label, config.target_smoothing);
        const auto pass = forward(model, sample.features);
        total += half_squared_error(pass.output(), target);
        const auto grad = gradients_from(model, pass, target);

        for (std::size_t l = 0; l < model.layers(); ++l) {
            auto& w = model.weights[l].data;
            auto& b = model.biases[l];
            const auto& gw = grad.weights[l].data;
            const auto& gb = grad.biases[l];
            if (config.momentum > 0) {
                auto& vw = state->weights[l].data;
                auto& vb = state->biases[l];
                for (std::size_t i = 0; i < w.size(); ++i) {
                    vw[i] = config.momentum * vw[i] - config.learning_rate * gw[i];
                    w[i] += vw[i];
                }
                for (std::size_t i = 0; i < b.size(); ++i) {
                    vb[i] = config.momentum * vb[i] - config.learning_rate * gb[i];
                    b[i] += vb[i];
                }
            } else {
                for (std::size_t i = 0; i < w.size(); ++i) w[i] -= config.learning_rate * gw[i];
                for (std::size_t i = 0; i < b.size(); ++i) b[i] -= config.learning_rate * gb[i];
            }
        }
    }
    return total / static_cast<double>(data.size());
}

TrainResult train(MlpModel model, std::span<const LabeledSample> data, const TrainConfig& config)
{
    config.validate();
    model.validate();
    TrainResult result;
    MomentumState momentum;
    for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
        const double mse = backprop_epoch(model, data, config, epoch, &momentum);
        result.loss_history.push_back(mse);
        if (mse <= config.goal_mse) break;
    }
    result.model = std::move(model);
    return result;
}

std::size_t argmax(std::span<const double> scores)
{
    std::size_t best = 0;
    for (std::size_t i = 1; i < scores.size(); ++i) {
        if (scores[i] > scores[best]) best = i;
    }
    return best;
}

Prediction predict(const MlpModel& model, const FeatureVector& x)
{
    if (model.outputs() != static_cast<int>(kExpressionCount)) {
        throw ShapeError("prediction needs " + std::to_string(kExpressionCount) + " outputs");
    }
    const auto pass = forward(model, x);
    Prediction p;
    std::copy(pass.output().begin(), pass.output().end(), p.scores.begin());
    p.label = static_cast<Expression>(argmax(p.scores));
    return p;
}

namespace {

void append_number(std::string& out, double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    out.append(buf, res.ptr);
}

std::vector<std::string_view> split_ws(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

double parse_double(std::string_view tok, std::size_t line_no)
{
    double v = 0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size() || !std::isfinite(v)) {
        throw ParseError("line " + std::to_string(line_no) + ": bad number '" + std::string(tok) + "'");
    }
    return v;
}

class LineCursor {
public:
    explicit LineCursor(std::string_view text) : text_(text) {}

    // Next line, or nullopt at end of text.
    std::optional<std::string_view> next()
    {
        if (pos_ >= text_.size()) return std::nullopt;
        const auto end = text_.find('\n', pos_);
        const auto line = text_.substr(pos_, end == std::string_view::npos ? std::string_view::npos : end - pos_);
        pos_ = end == std::string_view::npos ? text_.size() : end + 1;
        ++line_no_;
        return line;
    }

    std::size_t line_no() const { return line_no_; }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_no_ = 0;
};

std::vector<double> read_row(LineCursor& in, std::size_t expected, const std::string& what)
{
    const auto line = in.next();
    if (!line) throw ShapeError("file ends before " + what);
    const auto toks = split_ws(*line);
    if (toks.size() != expected) {
        throw ShapeError("line " + std::to_string(in.line_no()) + ": " + what + " has " + std::to_string(toks.size()) +
                         " values, expected " + std::to_string(expected));
    }
    std::vector<double> row;
    row.reserve(expected);
    for (auto t : toks) row.push_back(parse_double(t, in.line_no()));
    return row;
}

}  // namespace

std::string save_model(const MlpModel& model)
{
    model.validate();
    std::string out;
    out.append(kMagic).append("\n");
    out.append("dims");
    for (int d : model.layer_dims) out.append(" ").append(std::to_string(d));
    out.append("\nlabels");
    for (auto n : expression_names()) out.append(" ").append(n);
    out.append("\n");
    for (std::size_t l = 0; l < model.layers(); ++l) {
        const auto& w = model.weights[l];
        for (int r = 0; r < w.rows; ++r) {
            for (int c = 0; c < w.cols; ++c) {
                if (c) out.push_back(' ');
                append_number(out, w(r, c));
            }
            out.push_back('\n');
        }
        for (std::size_t i = 0; i < model.biases[l].size(); ++i) {
            if (i) out.push_back(' ');
            append_number(out, model.biases[l][i]);
        }
        out.push_back('\n');
    }
    return out;
}

MlpModel load_model(std::string_view text)
{
    LineCursor in(text);
    const auto magic = in.next();
    if (!magic || split_ws(*magic).size() != 2 || split_ws(*magic)[0] != "fer-mlp" || split_ws(*magic)[1] != "1") {
        throw VersionError("missing or unsupported magic line, expected '" + std::string(kMagic) + "'");
    }

    const auto dims_line = in.next();
    if (!dims_line) throw ShapeError("file ends before dims line");
    const auto dims_tok = split_ws(*dims_line);
    if (dims_tok.size() < 3 || dims_tok[0] != "dims") throw ShapeError("malformed dims line");
    std::vector<int> dims;
    for (std::size_t i = 1; i < dims_tok.size(); ++i) {
        int d = 0;
        const auto res = std::from_chars(dims_tok[i].data(), dims_tok[i].data() + dims_tok[i].size(), d);
        if (res.ec != std::errc() || res.ptr != dims_tok[i].data() + dims_tok[i].size() || d < 1) {
            throw ShapeError("bad layer size '" + std::string(dims_tok[i]) + "'");
        }
        dims.push_back(d);
    }

    const auto labels_line = in.next();
    if (!labels_line) throw ShapeError("file ends before label line");
    const auto labels = split_ws(*labels_line);
    if (labels.size() != kExpressionCount + 1 || labels[0] != "labels") throw VersionError("malformed label line");
    for (std::size_t i = 0; i < kExpressionCount; ++i) {
        if (labels[i + 1] != expression_names()[i]) throw VersionError("label order differs from this build");
    }

    MlpModel m = MlpModel::zeros(dims);
    for (std::size_t l = 0; l < m.layers(); ++l) {
        auto& w = m.weights[l];
        for (int r = 0; r < w.rows; ++r) {
            const auto row = read_row(in, static_cast<std::size_t>(w.cols),
                                      "weight row " + std::to_string(r) + " of layer " + std::to_string(l));
            std::copy(row.begin(), row.end(), w.data.begin() + static_cast<std::ptrdiff_t>(r) * w.cols);
        }
        m.biases[l] = read_row(in, m.biases[l].size(), "bias vector of layer " + std::to_string(l));
    }
    while (const auto extra = in.next()) {
        if (!split_ws(*extra).empty()) throw ShapeError("unexpected data after last layer");
    }
    return m;
}

void write_model_file(const std::string& path, const MlpModel& model)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot write " + path);
    f << save_model(model);
    if (!f) throw IoError("write failed for " + path);
}

MlpModel read_model_file(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open model file " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return load_model(ss.str());
}

}  // namespace fer
