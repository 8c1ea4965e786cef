#include "cardest/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace cardest::bench {

double normalized_error(std::span<const double> estimate, std::span<const double> truth,
                        double n_max) {
    if (estimate.size() != truth.size())
        throw std::invalid_argument("normalized_error: length mismatch");
    if (n_max <= 0.0) throw std::invalid_argument("normalized_error: n_max must be > 0");
    double sum = 0.0;
    for (std::size_t b = 0; b < estimate.size(); ++b) {
        const double d = estimate[b] - truth[b];
        sum += d * d;
    }
    return sum / (static_cast<double>(estimate.size()) * n_max * n_max);
}

RunMetrics metrics_from_trace(const runtime::RunTrace& trace, double n_max,
                              std::string method, std::string config_snapshot) {
    RunMetrics metrics;
    metrics.method = std::move(method);
    metrics.config_snapshot = std::move(config_snapshot);
    metrics.per_frame_normalized_sq_error.reserve(trace.num_frames());
    double sum = 0.0;
    for (std::size_t t = 0; t < trace.num_frames(); ++t) {
        const double e = normalized_error(trace.estimates[t], trace.truth[t], n_max);
        metrics.per_frame_normalized_sq_error.push_back(e);
        sum += e;
    }
    metrics.mean_normalized_mse =
        trace.num_frames() == 0 ? 0.0 : sum / static_cast<double>(trace.num_frames());
    return metrics;
}

double population_bound(pfd::Setting setting, int num_types) {
    if (setting == pfd::Setting::Homogeneous) return 64.0;
    if (num_types < 2) throw std::invalid_argument("population_bound: hetero needs T >= 2");
    return static_cast<double>(192 / num_types);
}

nn::TrainConfig default_teacher_config() {
    nn::TrainConfig config;
    config.max_epochs = 2500;
    config.patience = 50;
    config.mixing_alpha = 1.0;
    return config;
}

nn::TrainConfig default_student_config() {
    nn::TrainConfig config;
    config.max_epochs = 500;
    config.patience = 0;
    return config;
}

markov::TransitionSpec workload_spec(const PipelineConfig& config) {
    markov::TransitionSpec spec;
    spec.num_states = static_cast<int>(population_bound(config.setting, config.num_types)) + 1;
    spec.stay_prob = config.stay_prob;
    spec.jumps = config.jumps;
    return spec;
}

namespace {

markov::NodeCountSeries sample_homo_workload(const markov::TransitionSpec& spec, int frames,
                                             std::uint64_t seed) {
    const int init = markov::draw_initial_state(spec, mix_seed(seed, 0x100));
    return markov::sample_series(spec, init, frames, seed);
}

markov::HeteroSeries sample_hetero_workload(const markov::TransitionSpec& spec, int num_types,
                                            int frames, std::uint64_t seed) {
    std::vector<std::uint64_t> seeds(num_types);
    std::vector<int> initials(num_types);
    for (int b = 0; b < num_types; ++b) {
        seeds[b] = mix_seed(seed, b);
        initials[b] = markov::draw_initial_state(spec, mix_seed(seed, 0x100 + b));
    }
    return markov::sample_hetero(spec, num_types, seeds, initials, frames);
}

}  // namespace

Pipeline train_pipeline(const PipelineConfig& config) {
    const double n_max = population_bound(config.setting, config.num_types);
    const markov::TransitionSpec spec = workload_spec(config);
    const int frames = config.dataset_frames + 1;
    const SeedSet& seeds = config.seeds;

    pfd::GenieConfig teacher_genie;
    teacher_genie.init_seed = mix_seed(seeds.training, 0x91);
    pfd::GenieConfig student_genie;
    student_genie.init_seed = mix_seed(seeds.training, 0x92);

    nn::TrainConfig teacher_config = config.teacher_config;
    teacher_config.seed = mix_seed(seeds.training, 0);
    nn::TrainConfig student_config = config.student_config;
    student_config.seed = mix_seed(seeds.training, 1);
    student_config.mixing_alpha = config.alpha;

    Pipeline pipeline;
    if (config.setting == pfd::Setting::Homogeneous) {
        const auto teacher_workload =
            sample_homo_workload(spec, frames, mix_seed(seeds.workload, 0));
        const auto teacher_data = pfd::gen_teacher_training_data(
            teacher_workload, config.trial_length, config.lof, teacher_genie,
            mix_seed(seeds.protocol, 0), n_max);
        pipeline.teacher =
            pfd::train_teacher_offline(teacher_data, teacher_config, &pipeline.teacher_fit);

        const auto student_workload =
            sample_homo_workload(spec, frames, mix_seed(seeds.workload, 1));
        const auto student_data = pfd::gen_student_training_data(
            student_workload, config.trial_length, config.lof, pipeline.teacher, config.alpha,
            student_genie, mix_seed(seeds.protocol, 1), n_max);
        pipeline.student = pfd::train_student_offline(pipeline.teacher, student_data,
                                                      student_config, &pipeline.student_fit);
    } else {
        const auto teacher_workload = sample_hetero_workload(
            spec, config.num_types, frames, mix_seed(seeds.workload, 0));
        const auto teacher_data = pfd::gen_teacher_training_data(
            teacher_workload, config.trial_length, config.lof, teacher_genie,
            mix_seed(seeds.protocol, 0), n_max);
        pipeline.teacher =
            pfd::train_teacher_offline(teacher_data, teacher_config, &pipeline.teacher_fit);

        const auto student_workload = sample_hetero_workload(
            spec, config.num_types, frames, mix_seed(seeds.workload, 1));
        const auto student_data = pfd::gen_student_training_data(
            student_workload, config.trial_length, config.lof, pipeline.teacher, config.alpha,
            student_genie, mix_seed(seeds.protocol, 1), n_max);
        pipeline.student = pfd::train_student_offline(pipeline.teacher, student_data,
                                                      student_config, &pipeline.student_fit);
    }
    return pipeline;
}

const char* sweep_name(SweepVariable variable) {
    switch (variable) {
        case SweepVariable::TrialLength: return "trial_length";
        case SweepVariable::JumpsK: return "jumps_k";
        case SweepVariable::Alpha: return "alpha";
        case SweepVariable::NumTypes: return "num_types";
    }
    return "unknown";
}

SweepVariable sweep_from_name(const std::string& name) {
    if (name == "trial_length") return SweepVariable::TrialLength;
    if (name == "jumps_k") return SweepVariable::JumpsK;
    if (name == "alpha") return SweepVariable::Alpha;
    if (name == "num_types") return SweepVariable::NumTypes;
    throw std::invalid_argument("unknown sweep variable: " + name);
}

void parallel_tasks(std::vector<std::function<void()>> tasks, int threads) {
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min<int>(threads, static_cast<int>(tasks.size())));
    if (threads == 1) {
        for (auto& task : tasks) task();
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(tasks.size());
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(1)) < tasks.size();) {
                try {
                    tasks[i]();
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    }
    for (auto& worker : pool) worker.join();
    for (const auto& error : errors)
        if (error) std::rethrow_exception(error);
}

namespace {

struct Aggregate {
    double mean = 0.0;
    double stddev = 0.0;
};

Aggregate aggregate(const std::vector<double>& values) {
    Aggregate agg;
    if (values.empty()) return agg;
    double sum = 0.0;
    for (double v : values) sum += v;
    agg.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double var = 0.0;
        for (double v : values) var += (v - agg.mean) * (v - agg.mean);
        agg.stddev = std::sqrt(var / static_cast<double>(values.size() - 1));
    }
    return agg;
}

std::vector<ResultRow> run_alpha_sweep(const ExperimentConfig& config) {
    // One full pipeline per (alpha, seed); the reported metric is the
    // student's plain data MSE on its held-out split, which is comparable
    // across alpha values (the distill objective is not).
    struct Task {
        std::size_t value_idx;
        int run;
        double alpha;
    };
    std::vector<Task> task_list;
    for (std::size_t v = 0; v < config.values.size(); ++v)
        for (int r = 0; r < config.runs; ++r)
            task_list.push_back({v, r, config.values[v]});

    std::vector<double> losses(task_list.size(), 0.0);
    std::vector<std::function<void()>> tasks;
    tasks.reserve(task_list.size());
    for (std::size_t i = 0; i < task_list.size(); ++i) {
        tasks.push_back([&, i] {
            const Task& task = task_list[i];
            PipelineConfig pipe = config.base;
            pipe.alpha = task.alpha;
            pipe.seeds.workload = mix_seed(config.base.seeds.workload, task.run);
            pipe.seeds.protocol = mix_seed(config.base.seeds.protocol, task.run);
            pipe.seeds.training = mix_seed(config.base.seeds.training, task.run);
            const Pipeline pipeline = train_pipeline(pipe);
            losses[i] = pipeline.student_fit.final_test_data_mse;
        });
    }
    parallel_tasks(std::move(tasks), config.threads);

    std::vector<ResultRow> rows;
    for (std::size_t v = 0; v < config.values.size(); ++v) {
        std::vector<double> per_seed;
        for (std::size_t i = 0; i < task_list.size(); ++i)
            if (task_list[i].value_idx == v) per_seed.push_back(losses[i]);
        const Aggregate agg = aggregate(per_seed);
        rows.push_back({config.values[v], "nn", agg.mean, agg.stddev, config.runs,
                        config.base.dataset_frames});
    }
    return rows;
}

}  // namespace

std::vector<ResultRow> run_experiment(const ExperimentConfig& config) {
    if (config.values.empty())
        throw std::invalid_argument("run_experiment: sweep values must be nonempty");
    if (config.runs < 1) throw std::invalid_argument("run_experiment: runs must be >= 1");

    if (config.sweep == SweepVariable::Alpha) return run_alpha_sweep(config);

    const bool homo = config.base.setting == pfd::Setting::Homogeneous;

    struct Point {
        double value = 0.0;
        PipelineConfig pipe;
        runtime::BudgetPlan plan;
    };
    std::vector<Point> points;
    for (double value : config.values) {
        Point point;
        point.value = value;
        point.pipe = config.base;
        switch (config.sweep) {
            case SweepVariable::TrialLength: {
                const int l = static_cast<int>(value);
                point.pipe.trial_length = l;
                point.plan = homo ? runtime::equalize_homo(l, config.base.lof.num_lof,
                                                           config.base.lof.l_lof)
                                  : runtime::equalize_hetero(l, config.base.num_types,
                                                             config.base.lof.num_lof,
                                                             config.base.lof.l_lof);
                break;
            }
            case SweepVariable::JumpsK:
                point.pipe.jumps = static_cast<int>(value);
                point.plan = homo ? runtime::equalize_homo(config.base.trial_length,
                                                           config.base.lof.num_lof,
                                                           config.base.lof.l_lof)
                                  : runtime::equalize_hetero(config.base.trial_length,
                                                             config.base.num_types,
                                                             config.base.lof.num_lof,
                                                             config.base.lof.l_lof);
                break;
            case SweepVariable::NumTypes:
                point.pipe.num_types = static_cast<int>(value);
                point.plan = runtime::equalize_hetero(config.base.trial_length,
                                                      point.pipe.num_types,
                                                      config.base.lof.num_lof,
                                                      config.base.lof.l_lof);
                break;
            case SweepVariable::Alpha:
                break;  // handled above
        }
        if (!config.reuse_model)
            point.pipe.seeds.training = mix_seed(config.base.seeds.training,
                                                 0xA0 + points.size());
        points.push_back(std::move(point));
    }

    // Train per sweep point, or once at the base config when reusing.
    std::vector<Pipeline> pipelines(config.reuse_model ? 1 : points.size());
    {
        std::vector<std::function<void()>> tasks;
        if (config.reuse_model) {
            tasks.push_back([&] { pipelines[0] = train_pipeline(config.base); });
        } else {
            for (std::size_t p = 0; p < points.size(); ++p)
                tasks.push_back([&, p] { pipelines[p] = train_pipeline(points[p].pipe); });
        }
        parallel_tasks(std::move(tasks), config.threads);
    }

    const int methods = 3;
    std::vector<std::vector<double>> run_means(points.size() * methods);
    std::vector<std::function<void()>> eval_tasks;
    for (std::size_t p = 0; p < points.size(); ++p)
        for (int m = 0; m < methods; ++m) run_means[p * methods + m].resize(config.runs);

    for (std::size_t p = 0; p < points.size(); ++p) {
        eval_tasks.push_back([&, p] {
            const Point& point = points[p];
            const Pipeline& pipeline = pipelines[config.reuse_model ? 0 : p];
            const double n_max =
                population_bound(point.pipe.setting, point.pipe.num_types);
            const markov::TransitionSpec spec = workload_spec(point.pipe);
            for (int r = 0; r < config.runs; ++r) {
                const std::uint64_t workload_seed =
                    mix_seed(config.base.seeds.eval, p, static_cast<std::uint64_t>(r));
                auto trace_seed = [&](int method) {
                    return mix_seed(config.base.seeds.protocol, 0x1000 + p * 8 + method,
                                    static_cast<std::uint64_t>(r));
                };
                if (homo) {
                    const auto workload =
                        sample_homo_workload(spec, config.frames, workload_seed);
                    const auto nn_trace = runtime::nn_online_homo(
                        pipeline.student, workload, point.plan, point.pipe.lof, trace_seed(0));
                    const auto srcs_trace =
                        runtime::srcs_online(workload, point.plan, n_max, trace_seed(1));
                    const auto aware_trace =
                        runtime::bb_aware_online(workload, point.plan, n_max, trace_seed(2));
                    run_means[p * methods + 0][r] =
                        metrics_from_trace(nn_trace, n_max, "nn").mean_normalized_mse;
                    run_means[p * methods + 1][r] =
                        metrics_from_trace(srcs_trace, n_max, "srcs").mean_normalized_mse;
                    run_means[p * methods + 2][r] =
                        metrics_from_trace(aware_trace, n_max, "bb_aware").mean_normalized_mse;
                } else {
                    const auto workload = sample_hetero_workload(
                        spec, point.pipe.num_types, config.frames, workload_seed);
                    const auto nn_trace = runtime::nn_online_hetero(
                        pipeline.student, workload, point.plan, point.pipe.lof, trace_seed(0));
                    const auto srcs_trace =
                        runtime::t_srcs_online(workload, point.plan, n_max, trace_seed(1));
                    const auto aware_trace =
                        runtime::t_bb_aware_online(workload, point.plan, n_max, trace_seed(2));
                    run_means[p * methods + 0][r] =
                        metrics_from_trace(nn_trace, n_max, "nn").mean_normalized_mse;
                    run_means[p * methods + 1][r] =
                        metrics_from_trace(srcs_trace, n_max, "t_srcs").mean_normalized_mse;
                    run_means[p * methods + 2][r] =
                        metrics_from_trace(aware_trace, n_max, "t_bb_aware").mean_normalized_mse;
                }
            }
        });
    }
    parallel_tasks(std::move(eval_tasks), config.threads);

    const char* method_names_homo[] = {"nn", "srcs", "bb_aware"};
    const char* method_names_het[] = {"nn", "t_srcs", "t_bb_aware"};
    std::vector<ResultRow> rows;
    for (std::size_t p = 0; p < points.size(); ++p) {
        for (int m = 0; m < methods; ++m) {
            const Aggregate agg = aggregate(run_means[p * methods + m]);
            rows.push_back({points[p].value,
                            homo ? method_names_homo[m] : method_names_het[m], agg.mean,
                            agg.stddev, config.runs, config.frames});
        }
    }
    return rows;
}

void emit_results(std::span<const ResultRow> rows, ResultFormat format,
                  const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    if (format == ResultFormat::Csv) {
        out.precision(17);
        out << "sweep_value,method,mean_mse,std_mse,runs,frames\n";
        for (const ResultRow& row : rows) {
            out << row.sweep_value << ',' << row.method << ',' << row.mean_mse << ','
                << row.std_mse << ',' << row.runs << ',' << row.frames << "\n";
        }
        return;
    }
    nlohmann::json doc;
    doc["results"] = nlohmann::json::array();
    for (const ResultRow& row : rows) {
        doc["results"].push_back({{"sweep_value", row.sweep_value},
                                  {"method", row.method},
                                  {"mean_mse", row.mean_mse},
                                  {"std_mse", row.std_mse},
                                  {"runs", row.runs},
                                  {"frames", row.frames}});
    }
    out << doc.dump(2) << "\n";
}

std::vector<ResultRow> load_results_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("empty results csv: " + path.string());
    if (line != "sweep_value,method,mean_mse,std_mse,runs,frames")
        throw std::runtime_error("unexpected results csv header: " + line);

    std::vector<ResultRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream cells(line);
        std::string cell;
        ResultRow row;
        std::getline(cells, cell, ',');
        row.sweep_value = std::stod(cell);
        std::getline(cells, row.method, ',');
        std::getline(cells, cell, ',');
        row.mean_mse = std::stod(cell);
        std::getline(cells, cell, ',');
        row.std_mse = std::stod(cell);
        std::getline(cells, cell, ',');
        row.runs = std::stoi(cell);
        if (!std::getline(cells, cell, ','))
            throw std::runtime_error("short row in results csv: " + line);
        row.frames = std::stoi(cell);
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_loss_curve_csv(const nn::FitResult& fit, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out.precision(17);
    out << "epoch,train_loss,test_loss\n";
    for (std::size_t e = 0; e < fit.curve.size(); ++e)
        out << e << ',' << fit.curve[e].train << ',' << fit.curve[e].test << "\n";
}

}  // namespace cardest::bench
