// Minimal dense feed-forward network with backpropagation, MSE and
// distillation losses, and JSON weight serialization. The teacher, student
// and genie models all share this type; they differ only in input width and
// output width.
//
// Networks operate in scaled space: features and targets are divided by
// n_max, and predict() multiplies back (and clamps) at the boundary.
#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "cardest/features.hpp"

namespace cardest::nn {

enum class Activation : std::uint8_t { ReLU, Sigmoid, Linear };

const char* activation_name(Activation activation);
Activation activation_from_name(const std::string& name);

struct Scaling {
    double n_max = 1.0;
    int num_types = 1;
};

struct DenseNet {
    std::vector<int> layer_dims;                // sizes, input first
    std::vector<Activation> activations;        // one per weight layer
    std::vector<std::vector<double>> weights;   // [l]: dims[l+1] x dims[l], row-major
    std::vector<std::vector<double>> biases;    // [l]: dims[l+1]
    Scaling scaling;

    int input_dim() const { return layer_dims.front(); }
    int output_dim() const { return layer_dims.back(); }
    std::size_t num_layers() const { return activations.size(); }
};

/// The regression architecture used throughout: input layer of width L = in
/// with ReLU, two L/2 sigmoid hidden layers, linear output.
std::vector<int> mlp_dims(int input_dim, int output_dim);
std::vector<Activation> mlp_activations();

/// Fresh net with Glorot-uniform weights (+-sqrt(6/(fan_in+fan_out))) and
/// zero biases, deterministic given seed.
DenseNet init_net(std::vector<int> layer_dims, std::vector<Activation> activations,
                  std::uint64_t seed, Scaling scaling = {});

/// Cached activations from a batch forward pass, reused by backward_batch.
struct BatchCache {
    int batch = 0;
    std::vector<std::vector<double>> pre;   // per layer, batch x dims[l+1]
    std::vector<std::vector<double>> post;
};

/// y (batch x output_dim, row-major) = net(x). x is batch x input_dim.
void forward_batch(const DenseNet& net, const double* x, int batch, double* y,
                   BatchCache* cache = nullptr);

/// Single-sample forward in scaled space. Throws on length mismatch.
std::vector<double> forward(const DenseNet& net, std::span<const double> x);

/// Prediction in node-count units: forward, times n_max, clamped to
/// [0, n_max] per component.
std::vector<double> predict(const DenseNet& net, const feat::FeatureVector& features);

/// Squared Euclidean distance between prediction and target.
double loss_mse(std::span<const double> prediction, std::span<const double> target);

/// alpha * mse(student, target) + (1 - alpha) * mse(teacher, target).
/// Gradient flows only through the student prediction.
double loss_distill(std::span<const double> student_pred,
                    std::span<const double> teacher_pred,
                    std::span<const double> target, double alpha);

struct Gradients {
    std::vector<std::vector<double>> dw;
    std::vector<std::vector<double>> db;

    void init_for(const DenseNet& net);
};

/// Chain-rule gradients for a batch. dLdy is batch x output_dim (the caller
/// folds in any loss scaling such as 1/batch); cache must come from a
/// forward_batch call with the same x.
void backward_batch(const DenseNet& net, const double* x, int batch,
                    const BatchCache& cache, const double* dLdy, Gradients& out);

/// `steps` plain gradient-descent updates on one sample with MSE loss.
/// Returns the loss before the first update.
double fit_single(DenseNet& net, std::span<const double> x, std::span<const double> target,
                  double learning_rate, int steps);

/// Same, with the distillation objective: only the alpha-weighted data term
/// carries gradient, so alpha = 0 leaves the net unchanged.
double fit_single_distill(DenseNet& net, std::span<const double> x,
                          std::span<const double> target, double alpha,
                          double learning_rate, int steps);

// JSON weight file: {format_version, layer_dims, activations, weights,
// biases, scaling:{n_max, num_types}}. Round-trips bit-exactly.
void save_net(const DenseNet& net, const std::filesystem::path& path);
DenseNet load_net(const std::filesystem::path& path);

}  // namespace cardest::nn
