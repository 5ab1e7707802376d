#ifndef FER_MLP_HPP
#define FER_MLP_HPP

#include "fer/features.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fer {

/// Output index order is frozen and written into every model file.
enum class Expression : int { surprise = 0, neutral, sad, disgust, fear, happy, angry };

inline constexpr std::size_t kExpressionCount = 7;

const std::array<std::string_view, kExpressionCount>& expression_names();
std::string_view expression_name(Expression e);
std::optional<Expression> parse_expression(std::string_view name);

/// Row-major fan_out x fan_in matrix.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}

    double& operator()(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
    double operator()(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }

    friend bool operator==(const Matrix&, const Matrix&) = default;
};

inline const std::vector<int> kDefaultLayerDims = {15, 15, 7, 7};

/// Fully connected network with logistic activations on every non-input layer.
struct MlpModel {
    std::vector<int> layer_dims;
    std::vector<Matrix> weights;               ///< weights[l] maps layer l to layer l + 1
    std::vector<std::vector<double>> biases;   ///< biases[l] has layer_dims[l + 1] entries

    /// Zero weights and biases with the given shape.
    static MlpModel zeros(const std::vector<int>& dims);

    int inputs() const { return layer_dims.front(); }
    int outputs() const { return layer_dims.back(); }
    std::size_t layers() const { return weights.size(); }

    /// Throws ShapeError on inconsistent shapes, ParseError on non-finite values.
    void validate() const;

    friend bool operator==(const MlpModel&, const MlpModel&) = default;
};

struct TrainConfig {
    double learning_rate = 0.5;
    int max_epochs = 10000;
    double goal_mse = 0.001;
    std::uint64_t seed = 1;
    bool shuffle = true;
    double momentum = 0.0;
    /// Targets become (1 - s, s) instead of (1, 0).
    double target_smoothing = 0.0;

    void validate() const;
};

struct LabeledSample {
    FeatureVector features;
    Expression label = Expression::neutral;
};

/// Weights and biases i.i.d. uniform on [-0.5, 0.5) from a seeded mt19937_64.
MlpModel init_model(std::uint64_t seed, const std::vector<int>& dims = kDefaultLayerDims);

double sigmoid(double z);

/// activations[0] is the input, activations.back() the output layer.
struct ForwardPass {
    std::vector<std::vector<double>> activations;

    const std::vector<double>& output() const { return activations.back(); }
};

/// Throws InvalidArgument on a size mismatch or non-finite input.
ForwardPass forward(const MlpModel& model, std::span<const double> input);
ForwardPass forward(const MlpModel& model, const FeatureVector& x);

/// dE/dW and dE/db for one sample, E = 0.5 * ||y - t||^2.
struct Gradients {
    std::vector<Matrix> weights;
    std::vector<std::vector<double>> biases;
};

double sample_loss(const MlpModel& model, std::span<const double> input, std::span<const double> target);
Gradients backprop_gradients(const MlpModel& model, std::span<const double> input, std::span<const double> target);

/// One-hot target for `label` after smoothing.
std::vector<double> target_vector(Expression label, double smoothing = 0.0);

/// Velocity carried between updates when momentum is enabled.
struct MomentumState {
    std::vector<Matrix> weights;
    std::vector<std::vector<double>> biases;
};

/// Visiting order for epoch `epoch`: a Fisher-Yates permutation seeded with
/// seed + epoch when shuffling, otherwise input order.
std::vector<std::size_t> epoch_order(std::size_t n, const TrainConfig& config, int epoch);

/// One pass of per-sample gradient descent. Returns the mean per-sample loss,
/// each measured before that sample's update.
double backprop_epoch(MlpModel& model, std::span<const LabeledSample> data, const TrainConfig& config, int epoch = 0,
                      MomentumState* momentum = nullptr);

struct TrainResult {
    MlpModel model;
    std::vector<double> loss_history;
};

/// Runs epochs until the epoch loss reaches goal_mse or max_epochs is hit.
TrainResult train(MlpModel model, std::span<const LabeledSample> data, const TrainConfig& config);

struct Prediction {
    Expression label;
    std::array<double, kExpressionCount> scores{};
};

/// Argmax of the output layer; ties go to the lower index.
Prediction predict(const MlpModel& model, const FeatureVector& x);
std::size_t argmax(std::span<const double> scores);

/// Line-oriented text: magic line, dims line, label line, then per layer one
/// line per weight row followed by one bias line, 17 significant digits.
std::string save_model(const MlpModel& model);
MlpModel load_model(std::string_view text);

void write_model_file(const std::string& path, const MlpModel& model);
MlpModel read_model_file(const std::string& path);

}  // namespace fer

#endif  // FER_MLP_HPP
