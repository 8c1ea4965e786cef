// Command-line front end: workload generation, the four training phases,
// equal-budget evaluation, and the paper-style sweeps. Every subcommand
// accepts --config <file> (TOML sections [workload], [protocol], [training],
// [experiment]) with command-line overrides, and prints its effective seeds.
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cardest/bench.hpp"
#include "cardest/kernels.hpp"

namespace {

using namespace cardest;

struct Options {
    // [workload]
    int num_states = 65;
    double stay_prob = 0.2;
    int jumps = 5;
    // [protocol]
    int trial_length = 100;
    int num_lof = 3;
    int l_lof = 8;
    int num_types = 1;
    // [training]
    double alpha = 0.1;
    double learning_rate = 1e-3;
    int batch = 32;
    int epochs = 0;       // 0 = role default (teacher 2500, student 500)
    int early_stop = -1;
    int patience = -1;    // -1 = role default (teacher 50, student 0)
    double split = 0.8;
    std::vector<std::uint64_t> seeds = {101, 202, 303, 404};
    // [experiment]
    std::string sweep = "trial_length";
    std::vector<double> values;
    int runs = 20;
    int frames = 2000;
    int dataset_frames = 10000;

    bench::SeedSet seed_set() const {
        bench::SeedSet set;
        if (!seeds.empty()) set.workload = seeds[0];
        if (seeds.size() > 1) set.protocol = seeds[1];
        if (seeds.size() > 2) set.training = seeds[2];
        if (seeds.size() > 3) set.eval = seeds[3];
        return set;
    }
};

// --config handling: a small TOML-subset reader ([section], key = value with
// numbers, strings, and flat arrays) applied after parsing, so explicit
// command-line flags always win. Keys map to the dotted option names, e.g.
// [workload] q = 0.2 feeds --workload.q.
std::map<std::string, std::vector<std::string>> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CLI::FileError::Missing(path);
    std::map<std::string, std::vector<std::string>> entries;
    std::string line, section;
    auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        if (a == std::string::npos) return std::string();
        const auto b = s.find_last_not_of(" \t\r");
        return s.substr(a, b - a + 1);
    };
    while (std::getline(in, line)) {
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']') {
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw CLI::ConfigError("malformed config line: " + line);
        const std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        std::vector<std::string> tokens;
        if (!value.empty() && value.front() == '[') {
            if (value.back() != ']')
                throw CLI::ConfigError("unterminated array in config line: " + line);
            value = value.substr(1, value.size() - 2);
            std::istringstream cells(value);
            std::string cell;
            while (std::getline(cells, cell, ',')) {
                cell = trim(cell);
                if (!cell.empty()) tokens.push_back(cell);
            }
        } else {
            if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
                value = value.substr(1, value.size() - 2);
            tokens.push_back(value);
        }
        entries[section.empty() ? key : section + "." + key] = std::move(tokens);
    }
    return entries;
}

void apply_config(CLI::App* cmd, const std::string& path) {
    if (path.empty()) return;
    for (const auto& [key, tokens] : read_config_file(path)) {
        CLI::Option* op = cmd->get_option_no_throw("--" + key);
        if (op == nullptr) continue;  // key belongs to another subcommand
        if (op->count() > 0) continue;  // explicit flag wins
        for (const auto& token : tokens) op->add_result(token);
        op->run_callback();
    }
}

void add_config(CLI::App* cmd, std::string& config_path) {
    cmd->add_option("--config", config_path,
                    "TOML config file ([workload]/[protocol]/[training]/[experiment]); "
                    "command-line flags override");
}

void add_workload_opts(CLI::App* cmd, Options& opt) {
    cmd->add_option("-N,--workload.N", opt.num_states, "DTMC state count (states 0..N-1)");
    cmd->add_option("-q,--workload.q", opt.stay_prob, "DTMC stay probability");
    cmd->add_option("-k,--workload.k", opt.jumps, "chain steps per time frame");
}

void add_protocol_opts(CLI::App* cmd, Options& opt) {
    cmd->add_option("-l,--protocol.l", opt.trial_length,
                    "BB trial length (homogeneous) or 3-SS-BB blocks (heterogeneous)");
    cmd->add_option("--protocol.num_lof", opt.num_lof, "LoF trials at frame 0 / in SRC_s");
    cmd->add_option("--protocol.l_lof", opt.l_lof, "LoF trial length");
    cmd->add_option("-T,--protocol.T", opt.num_types, "node types (1 = homogeneous)");
}

void add_training_opts(CLI::App* cmd, Options& opt) {
    cmd->add_option("-a,--alpha,--training.alpha", opt.alpha, "distillation mixing ratio");
    cmd->add_option("--training.lr", opt.learning_rate, "Adam learning rate");
    cmd->add_option("--training.batch", opt.batch, "mini-batch size");
    cmd->add_option("--training.epochs", opt.epochs, "max epochs (0 = role default)");
    cmd->add_option("--training.early_stop", opt.early_stop, "hard stop epoch (<=0 off)");
    cmd->add_option("--training.patience", opt.patience,
                    "test-loss patience (-1 = role default)");
    cmd->add_option("--training.split", opt.split, "train fraction of the dataset");
    cmd->add_option("--training.seeds", opt.seeds,
                    "base seeds: workload protocol training eval");
}

void print_seeds(const Options& opt) {
    const bench::SeedSet s = opt.seed_set();
    std::cout << "seeds: workload=" << s.workload << " protocol=" << s.protocol
              << " training=" << s.training << " eval=" << s.eval << "\n";
}

nn::TrainConfig make_train_config(const Options& opt, bool teacher) {
    nn::TrainConfig config = teacher ? bench::default_teacher_config()
                                     : bench::default_student_config();
    config.learning_rate = opt.learning_rate;
    config.batch_size = opt.batch;
    if (opt.epochs > 0) config.max_epochs = opt.epochs;
    config.early_stop_epoch = opt.early_stop;
    if (opt.patience >= 0) config.patience = opt.patience;
    config.mixing_alpha = teacher ? 1.0 : opt.alpha;
    config.train_fraction = opt.split;
    config.seed = mix_seed(opt.seed_set().training, teacher ? 0 : 1);
    return config;
}

double resolve_n_max(double requested, int num_types) {
    if (requested > 0.0) return requested;
    return bench::population_bound(
        num_types <= 1 ? pfd::Setting::Homogeneous : pfd::Setting::Heterogeneous,
        num_types);
}

int cmd_gen_workload(const Options& opt, const std::string& out, int frames) {
    print_seeds(opt);
    markov::TransitionSpec spec{opt.num_states, opt.stay_prob, opt.jumps};
    const bench::SeedSet seeds = opt.seed_set();
    markov::HeteroSeries series;
    if (opt.num_types <= 1) {
        const int init = markov::draw_initial_state(spec, mix_seed(seeds.workload, 0x100));
        series = markov::as_hetero(markov::sample_series(spec, init, frames, seeds.workload));
    } else {
        std::vector<std::uint64_t> type_seeds(opt.num_types);
        std::vector<int> initials(opt.num_types);
        for (int b = 0; b < opt.num_types; ++b) {
            type_seeds[b] = mix_seed(seeds.workload, b);
            initials[b] = markov::draw_initial_state(spec, mix_seed(seeds.workload, 0x100 + b));
        }
        series = markov::sample_hetero(spec, opt.num_types, type_seeds, initials, frames);
    }
    markov::write_series_csv(out, series);
    std::cout << "wrote " << series.num_frames() << " frames x " << series.num_types()
              << " type(s) to " << out << "\n";
    return 0;
}

int cmd_gen_data(const Options& opt, const std::string& workload_path,
                 const std::string& teacher_model, const std::string& out, double n_max_opt,
                 bool student) {
    print_seeds(opt);
    const markov::HeteroSeries workload = markov::read_series_csv(workload_path);
    const int num_types = workload.num_types();
    const double n_max = resolve_n_max(n_max_opt, num_types);
    const bench::SeedSet seeds = opt.seed_set();
    pfd::LofConfig lof{opt.num_lof, opt.l_lof};
    pfd::GenieConfig genie;
    genie.learning_rate = opt.learning_rate;
    genie.init_seed = mix_seed(seeds.training, student ? 0x92 : 0x91);

    pfd::PfdDataset dataset;
    if (student) {
        const nn::DenseNet teacher = nn::load_net(teacher_model);
        if (num_types == 1) {
            dataset = pfd::gen_student_training_data(workload.per_type[0], opt.trial_length,
                                                     lof, teacher, opt.alpha, genie,
                                                     mix_seed(seeds.protocol, 1), n_max);
        } else {
            dataset = pfd::gen_student_training_data(workload, opt.trial_length, lof, teacher,
                                                     opt.alpha, genie,
                                                     mix_seed(seeds.protocol, 1), n_max);
        }
    } else {
        if (num_types == 1) {
            dataset = pfd::gen_teacher_training_data(workload.per_type[0], opt.trial_length,
                                                     lof, genie, mix_seed(seeds.protocol, 0),
                                                     n_max);
        } else {
            dataset = pfd::gen_teacher_training_data(workload, opt.trial_length, lof, genie,
                                                     mix_seed(seeds.protocol, 0), n_max);
        }
    }
    pfd::save_dataset_jsonl(dataset, out);
    std::cout << "wrote " << dataset.records.size() << " records to " << out << "\n";
    return 0;
}

int cmd_train(const Options& opt, const std::string& data_path,
              const std::string& teacher_model, const std::string& out,
              const std::string& loss_curve, bool student) {
    print_seeds(opt);
    const pfd::PfdDataset dataset = pfd::load_dataset_jsonl(data_path);
    const nn::TrainConfig config = make_train_config(opt, !student);
    nn::FitResult fit;
    nn::DenseNet model;
    if (student) {
        const nn::DenseNet teacher = nn::load_net(teacher_model);
        model = pfd::train_student_offline(teacher, dataset, config, &fit);
    } else {
        model = pfd::train_teacher_offline(dataset, config, &fit);
    }
    nn::save_net(model, out);
    if (!loss_curve.empty()) bench::write_loss_curve_csv(fit, loss_curve);
    std::cout << "trained " << (student ? "student" : "teacher") << " for "
              << fit.epochs_run << " epochs; final test loss "
              << fit.curve.back().test << "; saved to " << out << "\n";
    return 0;
}

int cmd_evaluate(const Options& opt, const std::string& student_path, int runs, int frames,
                 const std::string& out, const std::string& json_out,
                 const std::string& trace_dir) {
    print_seeds(opt);
    const nn::DenseNet student = nn::load_net(student_path);
    const int num_types = student.scaling.num_types;
    const double n_max = student.scaling.n_max;
    const bool homo = num_types <= 1;
    const bench::SeedSet seeds = opt.seed_set();
    pfd::LofConfig lof{opt.num_lof, opt.l_lof};

    // The frame budget is fixed by the student's input layout.
    const int trial_length = homo ? (student.input_dim() - 1) / 3
                                  : (student.input_dim() - num_types) / (4 * (num_types - 1));
    std::cout << "budget from model: trial_length=" << trial_length << " types=" << num_types
              << "\n";
    const runtime::BudgetPlan plan =
        homo ? runtime::equalize_homo(trial_length, opt.num_lof, opt.l_lof)
             : runtime::equalize_hetero(trial_length, num_types, opt.num_lof, opt.l_lof);

    markov::TransitionSpec spec{static_cast<int>(n_max) + 1, opt.stay_prob, opt.jumps};
    std::map<std::string, std::vector<double>> per_method;
    for (int r = 0; r < runs; ++r) {
        const std::uint64_t wseed = mix_seed(seeds.eval, 0, static_cast<std::uint64_t>(r));
        std::map<std::string, runtime::RunTrace> traces;
        if (homo) {
            const int init = markov::draw_initial_state(spec, mix_seed(wseed, 0x100));
            const auto workload = markov::sample_series(spec, init, frames, wseed);
            traces["nn"] = runtime::nn_online_homo(student, workload, plan, lof,
                                                   mix_seed(seeds.protocol, 0x10, r));
            traces["srcs"] = runtime::srcs_online(workload, plan, n_max,
                                                  mix_seed(seeds.protocol, 0x11, r));
            traces["bb_aware"] = runtime::bb_aware_online(workload, plan, n_max,
                                                          mix_seed(seeds.protocol, 0x12, r));
        } else {
            std::vector<std::uint64_t> type_seeds(num_types);
            std::vector<int> initials(num_types);
            for (int b = 0; b < num_types; ++b) {
                type_seeds[b] = mix_seed(wseed, b);
                initials[b] = markov::draw_initial_state(spec, mix_seed(wseed, 0x100 + b));
            }
            const auto workload =
                markov::sample_hetero(spec, num_types, type_seeds, initials, frames);
            traces["nn"] = runtime::nn_online_hetero(student, workload, plan, lof,
                                                     mix_seed(seeds.protocol, 0x10, r));
            traces["t_srcs"] = runtime::t_srcs_online(workload, plan, n_max,
                                                      mix_seed(seeds.protocol, 0x11, r));
            traces["t_bb_aware"] = runtime::t_bb_aware_online(
                workload, plan, n_max, mix_seed(seeds.protocol, 0x12, r));
        }
        for (const auto& [method, trace] : traces) {
            per_method[method].push_back(
                bench::metrics_from_trace(trace, n_max, method).mean_normalized_mse);
            if (r == 0 && !trace_dir.empty()) {
                std::filesystem::create_directories(trace_dir);
                runtime::write_trace_csv(
                    trace, std::filesystem::path(trace_dir) / (method + "_run0.csv"));
            }
        }
    }

    std::vector<bench::ResultRow> rows;
    for (const auto& [method, means] : per_method) {
        double sum = 0.0;
        for (double m : means) sum += m;
        const double mean = sum / static_cast<double>(means.size());
        double var = 0.0;
        for (double m : means) var += (m - mean) * (m - mean);
        const double stddev =
            means.size() > 1 ? std::sqrt(var / static_cast<double>(means.size() - 1)) : 0.0;
        rows.push_back({static_cast<double>(trial_length), method, mean, stddev, runs,
                        frames});
        std::cout << method << ": mean normalized MSE " << mean << " (std " << stddev
                  << ")\n";
    }
    bench::emit_results(rows, bench::ResultFormat::Csv, out);
    if (!json_out.empty()) bench::emit_results(rows, bench::ResultFormat::Json, json_out);
    return 0;
}

int cmd_sweep(const Options& opt, bool desk, bool reuse_model, int threads,
              const std::string& out, const std::string& json_out, bool dataset_frames_set,
              bool runs_set, bool frames_set) {
    print_seeds(opt);
    bench::ExperimentConfig config;
    config.base.setting =
        opt.num_types <= 1 ? pfd::Setting::Homogeneous : pfd::Setting::Heterogeneous;
    config.base.trial_length = opt.trial_length;
    config.base.num_types = opt.num_types;
    config.base.jumps = opt.jumps;
    config.base.stay_prob = opt.stay_prob;
    config.base.alpha = opt.alpha;
    config.base.lof = {opt.num_lof, opt.l_lof};
    config.base.teacher_config = make_train_config(opt, true);
    config.base.student_config = make_train_config(opt, false);
    config.base.seeds = opt.seed_set();
    config.base.dataset_frames = opt.dataset_frames;
    config.sweep = bench::sweep_from_name(opt.sweep);
    config.values = opt.values;
    config.runs = opt.runs;
    config.frames = opt.frames;
    config.reuse_model = reuse_model;
    config.threads = threads;

    if (desk) {
        if (!dataset_frames_set)
            config.base.dataset_frames = opt.num_types <= 1 ? 5000 : 2000;
        if (!runs_set) config.runs = 5;
        if (!frames_set) config.frames = 500;
    }

    const auto rows = bench::run_experiment(config);
    bench::emit_results(rows, bench::ResultFormat::Csv, out);
    if (!json_out.empty()) bench::emit_results(rows, bench::ResultFormat::Json, json_out);
    for (const auto& row : rows) {
        std::cout << bench::sweep_name(config.sweep) << "=" << row.sweep_value << " "
                  << row.method << ": " << row.mean_mse << " (std " << row.std_mse << ")\n";
    }
    return 0;
}

int cmd_emit_plots(const std::string& results_path, const std::string& out,
                   const std::string& json_out) {
    const auto rows = bench::load_results_csv(results_path);
    // Pivot to one row per sweep value with a mean/std column pair per method.
    std::vector<std::string> methods;
    std::vector<double> values;
    for (const auto& row : rows) {
        if (std::find(methods.begin(), methods.end(), row.method) == methods.end())
            methods.push_back(row.method);
        if (std::find(values.begin(), values.end(), row.sweep_value) == values.end())
            values.push_back(row.sweep_value);
    }
    std::sort(values.begin(), values.end());

    std::ofstream plot(out);
    if (!plot) throw std::runtime_error("cannot open for writing: " + out);
    plot.precision(17);
    plot << "sweep_value";
    for (const auto& m : methods) plot << ',' << m << "_mean," << m << "_std";
    plot << "\n";
    for (double v : values) {
        plot << v;
        for (const auto& m : methods) {
            double mean = 0.0, stddev = 0.0;
            for (const auto& row : rows)
                if (row.sweep_value == v && row.method == m) {
                    mean = row.mean_mse;
                    stddev = row.std_mse;
                }
            plot << ',' << mean << ',' << stddev;
        }
        plot << "\n";
    }
    if (!json_out.empty()) bench::emit_results(rows, bench::ResultFormat::Json, json_out);
    std::cout << "wrote plot table for " << values.size() << " sweep values to " << out
              << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"node cardinality estimation toolkit"};
    app.require_subcommand(1);

    Options opt;
    bool force_scalar = false;
    app.add_flag("--force-scalar", force_scalar, "disable SIMD kernel dispatch");

    std::string out, workload_path, data_path, teacher_path, student_path, loss_curve;
    std::string json_out, trace_dir, results_path, config_path;
    int frames = 1000;
    double n_max_opt = 0.0;
    bool desk = false, reuse_model = false;
    int threads = 0;

    auto* gen_workload = app.add_subcommand("gen-workload", "sample a DTMC workload to CSV");
    add_config(gen_workload, config_path);
    add_workload_opts(gen_workload, opt);
    gen_workload->add_option("-T,--protocol.T", opt.num_types, "node types");
    gen_workload->add_option("--frames", frames, "frames to sample")->required();
    gen_workload->add_option("--training.seeds", opt.seeds, "base seeds");
    gen_workload->add_option("-o,--out", out, "output CSV")->required();

    auto* gen_teacher = app.add_subcommand("gen-teacher-data",
                                           "genie-driven privileged dataset (JSONL)");
    add_config(gen_teacher, config_path);
    add_protocol_opts(gen_teacher, opt);
    add_training_opts(gen_teacher, opt);
    gen_teacher->add_option("--workload", workload_path, "workload CSV")->required();
    gen_teacher->add_option("--n-max", n_max_opt, "population bound (0 = auto)");
    gen_teacher->add_option("-o,--out", out, "output JSONL")->required();

    auto* train_teacher = app.add_subcommand("train-teacher", "offline teacher training");
    add_config(train_teacher, config_path);
    add_training_opts(train_teacher, opt);
    train_teacher->add_option("--data", data_path, "teacher dataset JSONL")->required();
    train_teacher->add_option("--loss-curve", loss_curve, "epoch/train/test CSV");
    train_teacher->add_option("-o,--out", out, "model JSON")->required();

    auto* gen_student = app.add_subcommand("gen-student-data",
                                           "genie-driven public dataset (JSONL)");
    add_config(gen_student, config_path);
    add_protocol_opts(gen_student, opt);
    add_training_opts(gen_student, opt);
    gen_student->add_option("--workload", workload_path, "workload CSV")->required();
    gen_student->add_option("--teacher", teacher_path, "trained teacher JSON")->required();
    gen_student->add_option("--n-max", n_max_opt, "population bound (0 = auto)");
    gen_student->add_option("-o,--out", out, "output JSONL")->required();

    auto* train_student = app.add_subcommand("train-student",
                                             "offline student training with distillation");
    add_config(train_student, config_path);
    add_training_opts(train_student, opt);
    train_student->add_option("--data", data_path, "student dataset JSONL")->required();
    train_student->add_option("--teacher", teacher_path, "trained teacher JSON")->required();
    train_student->add_option("--loss-curve", loss_curve, "epoch/train/test CSV");
    train_student->add_option("-o,--out", out, "model JSON")->required();

    auto* evaluate = app.add_subcommand("evaluate",
                                        "equal-budget online comparison of all methods");
    add_config(evaluate, config_path);
    add_workload_opts(evaluate, opt);
    add_protocol_opts(evaluate, opt);
    evaluate->add_option("--training.seeds", opt.seeds, "base seeds");
    evaluate->add_option("--student", student_path, "trained student JSON")->required();
    evaluate->add_option("--experiment.runs", opt.runs, "independent runs")
        ->default_val(5);
    evaluate->add_option("--experiment.frames", opt.frames, "frames per run")
        ->default_val(500);
    evaluate->add_option("--trace-dir", trace_dir, "write run-0 per-frame traces here");
    evaluate->add_option("--json", json_out, "also emit JSON results");
    evaluate->add_option("-o,--out", out, "results CSV")->required();

    auto* sweep = app.add_subcommand("sweep", "train and evaluate across a sweep variable");
    add_config(sweep, config_path);
    add_workload_opts(sweep, opt);
    add_protocol_opts(sweep, opt);
    add_training_opts(sweep, opt);
    sweep->add_option("--experiment.sweep", opt.sweep,
                      "trial_length | jumps_k | alpha | num_types");
    auto* values_opt =
        sweep->add_option("--experiment.values", opt.values, "sweep values")->required();
    auto* runs_opt = sweep->add_option("--experiment.runs", opt.runs, "runs per value");
    auto* frames_opt = sweep->add_option("--experiment.frames", opt.frames, "frames per run");
    auto* ds_opt = sweep->add_option("--dataset-frames", opt.dataset_frames,
                                     "training dataset frames");
    sweep->add_flag("--desk", desk, "CI-scale defaults: 5k/2k datasets, 5 runs x 500 frames");
    sweep->add_flag("--reuse-model", reuse_model,
                    "train once at the base config and evaluate at each sweep value");
    sweep->add_option("--threads", threads, "worker pool size (0 = hardware)");
    sweep->add_option("--json", json_out, "also emit JSON results");
    sweep->add_option("-o,--out", out, "results CSV")->required();

    auto* emit_plots = app.add_subcommand("emit-plots", "pivot results CSV into plot tables");
    emit_plots->add_option("--results", results_path, "results CSV from evaluate/sweep")
        ->required();
    emit_plots->add_option("--json", json_out, "also emit JSON results");
    emit_plots->add_option("-o,--out", out, "plot-ready CSV")->required();

    CLI11_PARSE(app, argc, argv);
    try {
        for (CLI::App* sub : app.get_subcommands()) apply_config(sub, config_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    kernels::force_scalar(force_scalar);

    try {
        if (gen_workload->parsed()) return cmd_gen_workload(opt, out, frames);
        if (gen_teacher->parsed())
            return cmd_gen_data(opt, workload_path, "", out, n_max_opt, false);
        if (train_teacher->parsed())
            return cmd_train(opt, data_path, "", out, loss_curve, false);
        if (gen_student->parsed())
            return cmd_gen_data(opt, workload_path, teacher_path, out, n_max_opt, true);
        if (train_student->parsed())
            return cmd_train(opt, data_path, teacher_path, out, loss_curve, true);
        if (evaluate->parsed())
            return cmd_evaluate(opt, student_path, opt.runs, opt.frames, out, json_out,
                                trace_dir);
        if (sweep->parsed())
            return cmd_sweep(opt, desk, reuse_model, threads, out, json_out,
                             ds_opt->count() > 0, runs_opt->count() > 0,
                             frames_opt->count() > 0);
        if (emit_plots->parsed()) return cmd_emit_plots(results_path, out, json_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    (void)values_opt;
    return 0;
}
