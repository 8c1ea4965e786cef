// Offline mini-batch training with Adam. Handles both plain MSE fits
// (teacher) and distillation fits (student), where the teacher term is a
// per-sample constant that shifts the objective but carries no gradient.
#pragma once

#include <cstdint>
#include <vector>

#include "cardest/net.hpp"

namespace cardest::nn {

struct TrainConfig {
    double learning_rate = 1e-3;
    int batch_size = 32;
    int max_epochs = 500;
    int early_stop_epoch = -1;  // hard stop after this many epochs when > 0
    int patience = 0;           // stop after this many epochs without test improvement (0 = off)
    double mixing_alpha = 1.0;
    double train_fraction = 0.8;
    std::uint64_t seed = 1;
};

/// Inputs and targets in scaled space. teacher_sq_err holds the per-sample
/// scaled teacher loss for distillation; leave empty for plain MSE.
struct TrainSet {
    std::vector<std::vector<double>> inputs;
    std::vector<std::vector<double>> targets;
    std::vector<double> teacher_sq_err;
};

struct EpochLoss {
    double train = 0.0;          // training objective (running, pre-update)
    double test = 0.0;           // objective on the held-out split
    double test_data_mse = 0.0;  // plain data MSE on the held-out split
};

struct FitResult {
    std::vector<EpochLoss> curve;  // one entry per epoch run
    double final_test_data_mse = 0.0;
    int epochs_run = 0;
};

/// Shuffles once with config.seed, splits by train_fraction, then runs
/// mini-batch Adam until max_epochs, the early-stop epoch, or patience
/// exhaustion. Deterministic given (net, data, config).
FitResult fit_dataset(DenseNet& net, const TrainSet& data, const TrainConfig& config);

}  // namespace cardest::nn
