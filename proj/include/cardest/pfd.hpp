// The four-phase pipeline: genie-driven teacher dataset generation, offline
// teacher training, genie-driven student dataset generation (distilling
// against the trained teacher), offline student training. Parameterized over
// the homogeneous (BB) and heterogeneous (block-trial) settings.
#pragma once

#include <cstdint>
#include <filesystem>

#include "cardest/markov.hpp"
#include "cardest/train.hpp"

namespace cardest::pfd {

struct LofConfig {
    int num_lof = 3;
    int l_lof = 8;
};

struct GenieConfig {
    double learning_rate = 1e-3;
    int steps_per_frame = 1;
    std::uint64_t init_seed = 1;
};

/// One logged frame. Teacher datasets leave student_features empty; student
/// datasets carry both (the teacher features feed the frozen teacher's
/// predictions during offline distillation).
struct FrameRecord {
    int frame_index = 0;
    feat::FeatureVector student_features;
    feat::FeatureVector teacher_features;
    std::vector<double> target;           // true counts, unscaled
    std::vector<double> rough_estimates;  // rough estimates fed to the trial
};

enum class Setting : std::uint8_t { Homogeneous, Heterogeneous };

struct GenConfig {
    int trial_length = 0;  // l_BB (homo) or blocks l (hetero)
    int num_types = 1;
    double n_max = 0.0;    // population bound per type
    int num_iters = 0;     // records cover frames 1..num_iters
    std::uint64_t protocol_seed = 0;
    std::uint64_t genie_seed = 0;
    LofConfig lof;
};

struct PfdDataset {
    std::vector<FrameRecord> records;
    Setting setting = Setting::Homogeneous;
    GenConfig config;

    int num_types() const { return config.num_types; }
};

/// Workload must have num_iters+1 frames; frame 0 seeds the recursion via LoF
/// and is excluded from the records.
PfdDataset gen_teacher_training_data(const markov::NodeCountSeries& workload, int trial_length,
                                     LofConfig lof, GenieConfig genie, std::uint64_t seed,
                                     double n_max);
PfdDataset gen_teacher_training_data(const markov::HeteroSeries& workload, int trial_length,
                                     LofConfig lof, GenieConfig genie, std::uint64_t seed,
                                     double n_max);

/// Fresh teacher fitted to the dataset with plain MSE. fit_out, when given,
/// receives the loss curves.
nn::DenseNet train_teacher_offline(const PfdDataset& dataset, const nn::TrainConfig& config,
                                   nn::FitResult* fit_out = nullptr);

/// Student dataset: the genie student drives the rough estimates and is fit
/// online with the distillation loss against the pretrained teacher.
PfdDataset gen_student_training_data(const markov::NodeCountSeries& workload, int trial_length,
                                     LofConfig lof, const nn::DenseNet& teacher, double alpha,
                                     GenieConfig genie, std::uint64_t seed, double n_max);
PfdDataset gen_student_training_data(const markov::HeteroSeries& workload, int trial_length,
                                     LofConfig lof, const nn::DenseNet& teacher, double alpha,
                                     GenieConfig genie, std::uint64_t seed, double n_max);

/// Fresh student trained with the distillation objective; the teacher stays
/// frozen throughout.
nn::DenseNet train_student_offline(const nn::DenseNet& teacher, const PfdDataset& dataset,
                                   const nn::TrainConfig& config,
                                   nn::FitResult* fit_out = nullptr);

/// Scaled (inputs, targets[, teacher errors]) view of a dataset, ready for
/// fit_dataset. use_student_features selects which feature kind feeds the net.
nn::TrainSet to_train_set(const PfdDataset& dataset, bool use_student_features,
                          const nn::DenseNet* teacher = nullptr);

// JSONL persistence (one record per line) with a JSON sidecar
// `<path>.meta.json` holding the generation config; plus a wide-CSV export
// for inspection.
void save_dataset_jsonl(const PfdDataset& dataset, const std::filesystem::path& path);
PfdDataset load_dataset_jsonl(const std::filesystem::path& path);
void export_dataset_csv(const PfdDataset& dataset, const std::filesystem::path& path);

}  // namespace cardest::pfd
