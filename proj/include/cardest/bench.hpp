// Experiment harness: end-to-end training pipelines, equal-budget method
// evaluation, sweep orchestration, and plot-ready CSV/JSON emission.
#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>

#include "cardest/runtime.hpp"

namespace cardest::bench {

/// Per-frame squared error scaled by the squared population bound,
/// averaged over components: sum_b (est[b]-truth[b])^2 / (len * n_max^2).
double normalized_error(std::span<const double> estimate, std::span<const double> truth,
                        double n_max);

struct RunMetrics {
    std::vector<double> per_frame_normalized_sq_error;
    double mean_normalized_mse = 0.0;
    std::string method;
    std::string config_snapshot;
};

RunMetrics metrics_from_trace(const runtime::RunTrace& trace, double n_max,
                              std::string method, std::string config_snapshot = {});

/// Population bound per type: 64 homogeneous, floor(192/T) per type otherwise.
double population_bound(pfd::Setting setting, int num_types);

/// Base seeds; every task seed is mixed from these plus task indices.
struct SeedSet {
    std::uint64_t workload = 101;
    std::uint64_t protocol = 202;
    std::uint64_t training = 303;
    std::uint64_t eval = 404;
};

/// Everything needed to produce one trained teacher/student pair.
struct PipelineConfig {
    pfd::Setting setting = pfd::Setting::Homogeneous;
    int trial_length = 100;  // BB length (homo) or 3-SS-BB blocks (hetero)
    int num_types = 1;
    int jumps = 5;
    double stay_prob = 0.2;
    int dataset_frames = 10000;  // records per generated dataset
    double alpha = 0.1;
    pfd::LofConfig lof;
    nn::TrainConfig teacher_config;
    nn::TrainConfig student_config;
    SeedSet seeds;
};

/// Teacher defaults: up to 2500 epochs with patience 50. Student defaults:
/// capped at 500 epochs.
nn::TrainConfig default_teacher_config();
nn::TrainConfig default_student_config();

struct Pipeline {
    nn::DenseNet teacher;
    nn::DenseNet student;
    nn::FitResult teacher_fit;
    nn::FitResult student_fit;
};

markov::TransitionSpec workload_spec(const PipelineConfig& config);

/// Runs the four phases: teacher data, teacher training, student data,
/// student training. Deterministic given the config.
Pipeline train_pipeline(const PipelineConfig& config);

enum class SweepVariable : std::uint8_t { TrialLength, JumpsK, Alpha, NumTypes };

const char* sweep_name(SweepVariable variable);
SweepVariable sweep_from_name(const std::string& name);

struct ExperimentConfig {
    PipelineConfig base;
    SweepVariable sweep = SweepVariable::TrialLength;
    std::vector<double> values;
    int runs = 5;
    int frames = 500;         // evaluation frames per run
    bool reuse_model = false; // train once at the base config, evaluate at each value
    int threads = 0;          // worker pool size; 0 = hardware concurrency
};

struct ResultRow {
    double sweep_value = 0.0;
    std::string method;
    double mean_mse = 0.0;
    double std_mse = 0.0;
    int runs = 0;
    int frames = 0;
};

/// One row per (sweep value, method). Alpha sweeps report the student's
/// held-out data MSE per training seed (runs = seeds) under method "nn";
/// other sweeps evaluate nn / srcs / bb_aware (or their per-type variants)
/// online under equalized budgets.
std::vector<ResultRow> run_experiment(const ExperimentConfig& config);

enum class ResultFormat : std::uint8_t { Csv, Json };

void emit_results(std::span<const ResultRow> rows, ResultFormat format,
                  const std::filesystem::path& path);
std::vector<ResultRow> load_results_csv(const std::filesystem::path& path);

void write_loss_curve_csv(const nn::FitResult& fit, const std::filesystem::path& path);

/// Runs a list of independent tasks on a small worker pool. Task seeds must
/// be preassigned by the caller; results must go to disjoint slots.
void parallel_tasks(std::vector<std::function<void()>> tasks, int threads);

}  // namespace cardest::bench
