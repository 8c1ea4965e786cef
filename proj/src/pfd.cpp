#include "cardest/pfd.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace cardest::pfd {

namespace {

using markov::HeteroSeries;
using markov::NodeCountSeries;

double floored_rough(double prediction) { return std::max(1.0, prediction); }

std::vector<double> scaled(const std::vector<double>& v, double n_max) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] / n_max;
    return out;
}

std::vector<int> counts_at(const HeteroSeries& workload, std::size_t t) {
    std::vector<int> counts(workload.num_types());
    for (int b = 0; b < workload.num_types(); ++b) counts[b] = workload.per_type[b].values[t];
    return counts;
}

void check_gen_args(std::size_t workload_len, int trial_length, double n_max) {
    if (workload_len < 2)
        throw std::invalid_argument("dataset generation needs at least 2 workload frames");
    if (trial_length < 1) throw std::invalid_argument("trial_length must be >= 1");
    if (n_max <= 0.0) throw std::invalid_argument("n_max must be > 0");
}

/// Averaged-LoF rough estimates, one per type (single entry when T = 1).
std::vector<double> initial_rough(std::span<const int> n_active, LofConfig lof, Rng& rng) {
    std::vector<double> rough(n_active.size());
    std::vector<int> first_empties(lof.num_lof);
    for (std::size_t b = 0; b < n_active.size(); ++b) {
        for (int m = 0; m < lof.num_lof; ++m)
            first_empties[m] = proto::run_lof(n_active[b], lof.l_lof, rng).first_empty_slot;
        rough[b] = proto::srcs_rough_estimate(first_empties);
    }
    return rough;
}

GenConfig make_config(int trial_length, int num_types, double n_max, int num_iters,
                      std::uint64_t protocol_seed, std::uint64_t genie_seed, LofConfig lof) {
    GenConfig cfg;
    cfg.trial_length = trial_length;
    cfg.num_types = num_types;
    cfg.n_max = n_max;
    cfg.num_iters = num_iters;
    cfg.protocol_seed = protocol_seed;
    cfg.genie_seed = genie_seed;
    cfg.lof = lof;
    return cfg;
}

}  // namespace

PfdDataset gen_teacher_training_data(const NodeCountSeries& workload, int trial_length,
                                     LofConfig lof, GenieConfig genie, std::uint64_t seed,
                                     double n_max) {
    check_gen_args(workload.values.size(), trial_length, n_max);
    const auto& w = workload.values;
    const int num_iters = static_cast<int>(w.size()) - 1;

    nn::DenseNet genie_net =
        nn::init_net(nn::mlp_dims(trial_length + 1, 1), nn::mlp_activations(),
                     genie.init_seed, {n_max, 1});
    Rng rng(seed);

    PfdDataset dataset;
    dataset.setting = Setting::Homogeneous;
    dataset.config = make_config(trial_length, 1, n_max, num_iters, seed, genie.init_seed, lof);
    dataset.records.reserve(num_iters);

    const double rough0 = initial_rough(std::vector<int>{w[0]}, lof, rng)[0];
    proto::BBTrialResult trial = proto::run_bb(w[0], trial_length, rough0, rng);
    feat::FeatureVector features = feat::encode_bb_teacher(trial.counts, rough0, n_max);
    double prev_prediction = nn::predict(genie_net, features)[0];

    for (int t = 1; t <= num_iters; ++t) {
        const double rough = floored_rough(prev_prediction);
        trial = proto::run_bb(w[t], trial_length, rough, rng);
        features = feat::encode_bb_teacher(trial.counts, w[t - 1], n_max);
        prev_prediction = nn::predict(genie_net, features)[0];

        FrameRecord record;
        record.frame_index = t;
        record.teacher_features = features;
        record.target = {static_cast<double>(w[t])};
        record.rough_estimates = {rough};
        dataset.records.push_back(std::move(record));

        const std::vector<double> target_scaled = {w[t] / n_max};
        nn::fit_single(genie_net, features.values, target_scaled, genie.learning_rate,
                       genie.steps_per_frame);
    }
    return dataset;
}

PfdDataset gen_teacher_training_data(const HeteroSeries& workload, int trial_length,
                                     LofConfig lof, GenieConfig genie, std::uint64_t seed,
                                     double n_max) {
    check_gen_args(workload.num_frames(), trial_length, n_max);
    const int num_types = workload.num_types();
    if (num_types < 2)
        throw std::invalid_argument("heterogeneous generation needs at least 2 types");
    const int num_iters = static_cast<int>(workload.num_frames()) - 1;

    nn::DenseNet genie_net =
        nn::init_net(nn::mlp_dims((trial_length + 1) * num_types, num_types),
                     nn::mlp_activations(), genie.init_seed,
                     {n_max, num_types});
    Rng rng(seed);

    PfdDataset dataset;
    dataset.setting = Setting::Heterogeneous;
    dataset.config =
        make_config(trial_length, num_types, n_max, num_iters, seed, genie.init_seed, lof);
    dataset.records.reserve(num_iters);

    std::vector<int> active = counts_at(workload, 0);
    const std::vector<double> rough0 = initial_rough(active, lof, rng);
    proto::BlockTrialResult trial = proto::run_3ssbb(active, trial_length, rough0, rng);
    feat::FeatureVector features = feat::encode_3ssbb_teacher(trial, rough0, n_max);
    std::vector<double> prev_prediction = nn::predict(genie_net, features);

    for (int t = 1; t <= num_iters; ++t) {
        std::vector<double> rough(num_types);
        for (int b = 0; b < num_types; ++b) rough[b] = floored_rough(prev_prediction[b]);
        active = counts_at(workload, t);
        trial = proto::run_3ssbb(active, trial_length, rough, rng);

        std::vector<double> prev_truths(num_types);
        for (int b = 0; b < num_types; ++b)
            prev_truths[b] = workload.per_type[b].values[t - 1];
        features = feat::encode_3ssbb_teacher(trial, prev_truths, n_max);
        prev_prediction = nn::predict(genie_net, features);

        FrameRecord record;
        record.frame_index = t;
        record.teacher_features = features;
        record.target.assign(active.begin(), active.end());
        record.rough_estimates = rough;
        dataset.records.push_back(std::move(record));

        nn::fit_single(genie_net, features.values, scaled(dataset.records.back().target, n_max),
                       genie.learning_rate, genie.steps_per_frame);
    }
    return dataset;
}

PfdDataset gen_student_training_data(const NodeCountSeries& workload, int trial_length,
                                     LofConfig lof, const nn::DenseNet& teacher, double alpha,
                                     GenieConfig genie, std::uint64_t seed, double n_max) {
    check_gen_args(workload.values.size(), trial_length, n_max);
    if (teacher.input_dim() != trial_length + 1)
        throw std::invalid_argument("gen_student_training_data: teacher layout mismatch");
    const auto& w = workload.values;
    const int num_iters = static_cast<int>(w.size()) - 1;

    nn::DenseNet genie_net =
        nn::init_net(nn::mlp_dims(3 * trial_length + 1, 1), nn::mlp_activations(),
                     genie.init_seed, {n_max, 1});
    Rng rng(seed);

    PfdDataset dataset;
    dataset.setting = Setting::Homogeneous;
    dataset.config = make_config(trial_length, 1, n_max, num_iters, seed, genie.init_seed, lof);
    dataset.records.reserve(num_iters);

    const double rough0 = initial_rough(std::vector<int>{w[0]}, lof, rng)[0];
    proto::BBTrialResult trial = proto::run_bb(w[0], trial_length, rough0, rng);
    feat::FeatureVector student_features =
        feat::encode_bb_student(trial.outcomes, rough0, n_max);
    double prev_prediction = nn::predict(genie_net, student_features)[0];

    for (int t = 1; t <= num_iters; ++t) {
        const double rough = floored_rough(prev_prediction);
        trial = proto::run_bb(w[t], trial_length, rough, rng);
        student_features = feat::encode_bb_student(trial.outcomes, prev_prediction, n_max);

        FrameRecord record;
        record.frame_index = t;
        record.student_features = student_features;
        record.teacher_features = feat::encode_bb_teacher(trial.counts, w[t - 1], n_max);
        record.target = {static_cast<double>(w[t])};
        record.rough_estimates = {rough};
        dataset.records.push_back(std::move(record));

        prev_prediction = nn::predict(genie_net, student_features)[0];
        const std::vector<double> target_scaled = {w[t] / n_max};
        nn::fit_single_distill(genie_net, student_features.values, target_scaled, alpha,
                               genie.learning_rate, genie.steps_per_frame);
    }
    return dataset;
}

PfdDataset gen_student_training_data(const HeteroSeries& workload, int trial_length,
                                     LofConfig lof, const nn::DenseNet& teacher, double alpha,
                                     GenieConfig genie, std::uint64_t seed, double n_max) {
    check_gen_args(workload.num_frames(), trial_length, n_max);
    const int num_types = workload.num_types();
    if (num_types < 2)
        throw std::invalid_argument("heterogeneous generation needs at least 2 types");
    if (teacher.input_dim() != (trial_length + 1) * num_types)
        throw std::invalid_argument("gen_student_training_data: teacher layout mismatch");
    const int num_iters = static_cast<int>(workload.num_frames()) - 1;

    nn::DenseNet genie_net = nn::init_net(
        nn::mlp_dims(4 * (num_types - 1) * trial_length + num_types, num_types),
        nn::mlp_activations(), genie.init_seed, {n_max, num_types});
    Rng rng(seed);

    PfdDataset dataset;
    dataset.setting = Setting::Heterogeneous;
    dataset.config =
        make_config(trial_length, num_types, n_max, num_iters, seed, genie.init_seed, lof);
    dataset.records.reserve(num_iters);

    std::vector<int> active = counts_at(workload, 0);
    const std::vector<double> rough0 = initial_rough(active, lof, rng);
    proto::BlockTrialResult trial = proto::run_3ssbb(active, trial_length, rough0, rng);
    feat::FeatureVector student_features =
        feat::encode_3ssbb_student(trial, rough0, n_max);
    std::vector<double> prev_prediction = nn::predict(genie_net, student_features);

    for (int t = 1; t <= num_iters; ++t) {
        std::vector<double> rough(num_types);
        for (int b = 0; b < num_types; ++b) rough[b] = floored_rough(prev_prediction[b]);
        active = counts_at(workload, t);
        trial = proto::run_3ssbb(active, trial_length, rough, rng);
        student_features = feat::encode_3ssbb_student(trial, prev_prediction, n_max);

        std::vector<double> prev_truths(num_types);
        for (int b = 0; b < num_types; ++b)
            prev_truths[b] = workload.per_type[b].values[t - 1];

        FrameRecord record;
        record.frame_index = t;
        record.student_features = student_features;
        record.teacher_features = feat::encode_3ssbb_teacher(trial, prev_truths, n_max);
        record.target.assign(active.begin(), active.end());
        record.rough_estimates = rough;
        dataset.records.push_back(std::move(record));

        prev_prediction = nn::predict(genie_net, student_features);
        nn::fit_single_distill(genie_net, student_features.values,
                               scaled(dataset.records.back().target, n_max), alpha,
                               genie.learning_rate, genie.steps_per_frame);
    }
    return dataset;
}

nn::TrainSet to_train_set(const PfdDataset& dataset, bool use_student_features,
                          const nn::DenseNet* teacher) {
    if (dataset.records.empty()) throw std::invalid_argument("to_train_set: empty dataset");
    const double n_max = dataset.config.n_max;

    nn::TrainSet set;
    set.inputs.reserve(dataset.records.size());
    set.targets.reserve(dataset.records.size());
    for (const FrameRecord& record : dataset.records) {
        const feat::FeatureVector& fv =
            use_student_features ? record.student_features : record.teacher_features;
        if (fv.empty())
            throw std::invalid_argument("to_train_set: requested feature kind missing");
        set.inputs.push_back(fv.values);
        set.targets.push_back(scaled(record.target, n_max));
    }
    if (teacher) {
        set.teacher_sq_err.reserve(dataset.records.size());
        for (std::size_t i = 0; i < dataset.records.size(); ++i) {
            const std::vector<double> pred =
                nn::forward(*teacher, dataset.records[i].teacher_features.values);
            set.teacher_sq_err.push_back(nn::loss_mse(pred, set.targets[i]));
        }
    }
    return set;
}

nn::DenseNet train_teacher_offline(const PfdDataset& dataset, const nn::TrainConfig& config,
                                   nn::FitResult* fit_out) {
    nn::TrainSet set = to_train_set(dataset, /*use_student_features=*/false);
    nn::DenseNet teacher = nn::init_net(
        nn::mlp_dims(static_cast<int>(set.inputs.front().size()), dataset.num_types()),
        nn::mlp_activations(), mix_seed(config.seed, 0x7e),
        {dataset.config.n_max, dataset.num_types()});
    nn::TrainConfig teacher_config = config;
    teacher_config.mixing_alpha = 1.0;
    nn::FitResult fit = nn::fit_dataset(teacher, set, teacher_config);
    if (fit_out) *fit_out = std::move(fit);
    return teacher;
}

nn::DenseNet train_student_offline(const nn::DenseNet& teacher, const PfdDataset& dataset,
                                   const nn::TrainConfig& config,
                                   nn::FitResult* fit_out) {
    nn::TrainSet set = to_train_set(dataset, /*use_student_features=*/true, &teacher);
    nn::DenseNet student = nn::init_net(
        nn::mlp_dims(static_cast<int>(set.inputs.front().size()), dataset.num_types()),
        nn::mlp_activations(), mix_seed(config.seed, 0x57),
        {dataset.config.n_max, dataset.num_types()});
    nn::FitResult fit = nn::fit_dataset(student, set, config);
    if (fit_out) *fit_out = std::move(fit);
    return student;
}

namespace {

nlohmann::json feature_json(const feat::FeatureVector& fv) {
    if (fv.empty()) return nullptr;
    nlohmann::json j;
    j["layout"] = feat::layout_name(fv.layout);
    j["values"] = fv.values;
    return j;
}

feat::FeatureVector feature_from_json(const nlohmann::json& j) {
    feat::FeatureVector fv;
    if (j.is_null()) return fv;
    fv.layout = feat::layout_from_name(j.at("layout").get<std::string>());
    fv.values = j.at("values").get<std::vector<double>>();
    return fv;
}

std::filesystem::path sidecar_path(const std::filesystem::path& path) {
    std::filesystem::path p = path;
    p += ".meta.json";
    return p;
}

}  // namespace

void save_dataset_jsonl(const PfdDataset& dataset, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    for (const FrameRecord& record : dataset.records) {
        nlohmann::json line;
        line["frame"] = record.frame_index;
        line["student"] = feature_json(record.student_features);
        line["teacher"] = feature_json(record.teacher_features);
        line["target"] = record.target;
        line["rough"] = record.rough_estimates;
        out << line.dump() << "\n";
    }

    nlohmann::json meta;
    meta["setting"] = dataset.setting == Setting::Homogeneous ? "homo" : "hetero";
    meta["trial_length"] = dataset.config.trial_length;
    meta["num_types"] = dataset.config.num_types;
    meta["n_max"] = dataset.config.n_max;
    meta["num_iters"] = dataset.config.num_iters;
    meta["protocol_seed"] = dataset.config.protocol_seed;
    meta["genie_seed"] = dataset.config.genie_seed;
    meta["lof"] = {{"num_lof", dataset.config.lof.num_lof}, {"l_lof", dataset.config.lof.l_lof}};
    std::ofstream meta_out(sidecar_path(path));
    if (!meta_out)
        throw std::runtime_error("cannot open for writing: " + sidecar_path(path).string());
    meta_out << meta.dump(2) << "\n";
}

PfdDataset load_dataset_jsonl(const std::filesystem::path& path) {
    std::ifstream meta_in(sidecar_path(path));
    if (!meta_in)
        throw std::runtime_error("cannot open for reading: " + sidecar_path(path).string());
    const nlohmann::json meta = nlohmann::json::parse(meta_in);

    PfdDataset dataset;
    dataset.setting =
        meta.at("setting").get<std::string>() == "homo" ? Setting::Homogeneous
                                                        : Setting::Heterogeneous;
    dataset.config.trial_length = meta.at("trial_length").get<int>();
    dataset.config.num_types = meta.at("num_types").get<int>();
    dataset.config.n_max = meta.at("n_max").get<double>();
    dataset.config.num_iters = meta.at("num_iters").get<int>();
    dataset.config.protocol_seed = meta.at("protocol_seed").get<std::uint64_t>();
    dataset.config.genie_seed = meta.at("genie_seed").get<std::uint64_t>();
    dataset.config.lof.num_lof = meta.at("lof").at("num_lof").get<int>();
    dataset.config.lof.l_lof = meta.at("lof").at("l_lof").get<int>();

    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const nlohmann::json j = nlohmann::json::parse(line);
        FrameRecord record;
        record.frame_index = j.at("frame").get<int>();
        record.student_features = feature_from_json(j.at("student"));
        record.teacher_features = feature_from_json(j.at("teacher"));
        record.target = j.at("target").get<std::vector<double>>();
        record.rough_estimates = j.at("rough").get<std::vector<double>>();
        dataset.records.push_back(std::move(record));
    }
    return dataset;
}

void export_dataset_csv(const PfdDataset& dataset, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << "frame,targets,roughs,teacher_features";
    if (!dataset.records.empty() && !dataset.records.front().teacher_features.empty())
        out << '(' << feat::layout_name(dataset.records.front().teacher_features.layout) << ')';
    out << ",student_features";
    if (!dataset.records.empty() && !dataset.records.front().student_features.empty())
        out << '(' << feat::layout_name(dataset.records.front().student_features.layout) << ')';
    out << "\n";
    for (const FrameRecord& record : dataset.records) {
        out << record.frame_index << ",\"";
        for (std::size_t i = 0; i < record.target.size(); ++i)
            out << (i ? ";" : "") << record.target[i];
        out << "\",\"";
        for (std::size_t i = 0; i < record.rough_estimates.size(); ++i)
            out << (i ? ";" : "") << record.rough_estimates[i];
        out << "\",\"" << feat::to_csv_row(record.teacher_features) << "\",\""
            << feat::to_csv_row(record.student_features) << "\"\n";
    }
}

}  // namespace cardest::pfd
