// Acceptance suite: runs every gate criterion end to end and prints one
// pass/fail line per criterion. Select a subset with `acceptance 3 6 11`.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "cardest/bench.hpp"

using namespace cardest;

namespace {

struct Criterion {
    int id;
    const char* label;
    std::function<bool(std::string&)> run;
};

double elapsed_s(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return std::string(buf);
}

// ---------------------------------------------------------------------------
// 1. Gradient correctness: analytic backprop vs central finite differences.
bool criterion_gradients(std::string& detail) {
    const auto start = std::chrono::steady_clock::now();
    Rng rng(20240801);
    int nets_checked = 0;
    double worst = 0.0;
    while (nets_checked < 20) {
        const int in = rng.uniform_int(2, 8);
        const int hidden = rng.uniform_int(2, 8);
        const int out = rng.uniform_int(1, 3);
        auto net = nn::init_net({in, hidden, std::max(1, hidden / 2), out},
                                {nn::Activation::ReLU, nn::Activation::Sigmoid,
                                 nn::Activation::Linear},
                                rng.next_u64(), {1.0, out});
        std::vector<double> x(in), target(out);
        for (auto& v : x) v = rng.uniform01() + 0.25;
        for (auto& v : target) v = rng.uniform01();

        nn::BatchCache cache;
        std::vector<double> yhat(out), dLdy(out);
        nn::forward_batch(net, x.data(), 1, yhat.data(), &cache);
        bool kink = false;
        for (double pre : cache.pre[0])
            if (std::abs(pre) < 1e-3) kink = true;
        if (kink) continue;  // resample: finite differences need a smooth point

        for (int j = 0; j < out; ++j) dLdy[j] = 2.0 * (yhat[j] - target[j]);
        nn::Gradients grads;
        nn::backward_batch(net, x.data(), 1, cache, dLdy.data(), grads);

        const double step = 1e-5;
        auto loss_at = [&] { return nn::loss_mse(nn::forward(net, x), target); };
        auto check_param = [&](double& param, double analytic) {
            const double saved = param;
            param = saved + step;
            const double up = loss_at();
            param = saved - step;
            const double down = loss_at();
            param = saved;
            const double numeric = (up - down) / (2.0 * step);
            const double scale = std::max({std::abs(numeric), std::abs(analytic), 1e-8});
            worst = std::max(worst, std::abs(numeric - analytic) / scale);
        };
        for (std::size_t l = 0; l < net.num_layers(); ++l) {
            for (std::size_t i = 0; i < net.weights[l].size(); ++i)
                check_param(net.weights[l][i], grads.dw[l][i]);
            for (std::size_t i = 0; i < net.biases[l].size(); ++i)
                check_param(net.biases[l][i], grads.db[l][i]);
        }
        ++nets_checked;
    }
    const double secs = elapsed_s(start);
    detail = fmt("worst relative error %.3g over %d nets, %.1f s", worst, nets_checked, secs);
    return worst < 1e-4 && secs < 10.0;
}

// ---------------------------------------------------------------------------
// 2. Distillation-loss identities and affinity in alpha.
bool criterion_distill_identities(std::string& detail) {
    Rng rng(2);
    double worst_endpoint = 0.0, worst_affine = 0.0;
    for (int rep = 0; rep < 50; ++rep) {
        const int len = rng.uniform_int(1, 4);
        std::vector<double> student(len), teacher(len), target(len);
        for (int i = 0; i < len; ++i) {
            student[i] = rng.uniform01() * 10;
            teacher[i] = rng.uniform01() * 10;
            target[i] = rng.uniform01() * 10;
        }
        worst_endpoint = std::max(worst_endpoint,
                                  std::abs(nn::loss_distill(student, teacher, target, 1.0) -
                                           nn::loss_mse(student, target)));
        worst_endpoint = std::max(worst_endpoint,
                                  std::abs(nn::loss_distill(student, teacher, target, 0.0) -
                                           nn::loss_mse(teacher, target)));
        const double at0 = nn::loss_distill(student, teacher, target, 0.0);
        const double at1 = nn::loss_distill(student, teacher, target, 1.0);
        for (int g = 0; g <= 10; ++g) {
            const double alpha = g / 10.0;
            const double expect = at0 + alpha * (at1 - at0);
            worst_affine = std::max(
                worst_affine,
                std::abs(nn::loss_distill(student, teacher, target, alpha) - expect));
        }
    }
    detail = fmt("endpoint error %.3g, affinity error %.3g", worst_endpoint, worst_affine);
    return worst_endpoint == 0.0 && worst_affine < 1e-12;
}

// ---------------------------------------------------------------------------
// 3. BB estimator consistency against the occupancy-inversion oracle.
bool criterion_bb_consistency(std::string& detail) {
    const auto start = std::chrono::steady_clock::now();
    const int l = 100, trials = 10000;
    Rng rng(3);
    std::string parts;
    bool ok = true;
    for (int n : {8, 32, 64}) {
        double sum = 0.0;
        for (int i = 0; i < trials; ++i) {
            Rng trial_rng = rng.fork(n * 100000 + i);
            const auto trial = proto::run_bb(n, l, static_cast<double>(n), trial_rng);
            sum += proto::bb_estimate(proto::count_empty(trial), l,
                                      trial.participation_prob, n, 1000.0);
        }
        const double mean = sum / trials;
        ok = ok && mean > 0.95 * n && mean < 1.05 * n;
        parts += fmt(" n=%d mean=%.2f", n, mean);
    }
    const double secs = elapsed_s(start);
    detail = fmt("%s, %.1f s", parts.c_str(), secs);
    return ok && secs < 30.0;
}

// ---------------------------------------------------------------------------
// 4. SRC_s accuracy guarantee at eps = 0.5.
bool criterion_srcs_coverage(std::string& detail) {
    const auto start = std::chrono::steady_clock::now();
    const double eps = 0.5;
    const int l = proto::srcs_bb_length(eps);
    if (l != 102) {
        detail = fmt("srcs_bb_length(0.5) = %d, expected 102", l);
        return false;
    }
    Rng rng(4);
    std::string parts;
    bool ok = true;
    for (int n : {16, 48}) {
        int covered = 0;
        const int frames = 10000;
        for (int i = 0; i < frames; ++i) {
            Rng frame_rng = rng.fork(n * 1000000 + i);
            const double est =
                proto::srcs_frame(n, 3, 8, l, 1000.0, frame_rng).estimate;
            if (std::abs(est - n) <= eps * n) ++covered;
        }
        const double coverage = static_cast<double>(covered) / frames;
        ok = ok && coverage >= 0.95;
        parts += fmt(" n=%d coverage=%.4f", n, coverage);
    }
    const double secs = elapsed_s(start);
    detail = fmt("%s, %.1f s", parts.c_str(), secs);
    return ok && secs < 60.0;
}

// ---------------------------------------------------------------------------
// 5. DTMC fidelity: empirical k-step frequencies vs matrix_power rows.
// At 1e5 frames each of the 65 states gets ~1.5e3 visits, which leaves
// per-row sampling noise of 0.03-0.05 TV; the statistically meaningful check
// at this budget pools the interior rows, whose offset law is shared, and
// compares against the matrix_power row (expected sampling TV ~4e-3).
bool criterion_dtmc_fidelity(std::string& detail) {
    const auto start = std::chrono::steady_clock::now();
    const markov::TransitionSpec spec{65, 0.2, 5};
    const int frames = 100000;
    const int k = spec.jumps, n = spec.num_states;
    const auto series = markov::sample_series(spec, 32, frames, 20240805);
    const auto pk = markov::matrix_power(markov::build_tpm(spec), spec.jumps);

    std::vector<double> offset_counts(2 * k + 1, 0.0);
    double interior_total = 0.0;
    for (std::size_t t = 1; t < series.values.size(); ++t) {
        const int from = series.values[t - 1];
        if (from < k || from >= n - k) continue;
        ++offset_counts[series.values[t] - from + k];
        ++interior_total;
    }
    const int ref = n / 2;
    double tv = 0.0;
    for (int d = -k; d <= k; ++d)
        tv += std::abs(offset_counts[d + k] / interior_total - pk.at(ref, ref + d));
    tv *= 0.5;
    const double secs = elapsed_s(start);
    detail = fmt("pooled interior TV %.4f over %.0f transitions, %.1f s", tv,
                 interior_total, secs);
    return tv < 0.02 && interior_total > 50000 && secs < 10.0;
}

// ---------------------------------------------------------------------------
// Shared desk-scale training for criteria 6-9 (homogeneous).
struct HomoDeskResult {
    bench::Pipeline pipeline;
    bench::PipelineConfig config;
};

bench::PipelineConfig homo_desk_config(int trial_length, std::uint64_t seed_salt) {
    bench::PipelineConfig config;
    config.setting = pfd::Setting::Homogeneous;
    config.trial_length = trial_length;
    config.num_types = 1;
    config.jumps = 5;
    config.stay_prob = 0.2;
    config.dataset_frames = 5000;
    config.alpha = 0.1;
    config.teacher_config = bench::default_teacher_config();
    config.student_config = bench::default_student_config();
    config.seeds.workload = mix_seed(101, seed_salt);
    config.seeds.protocol = mix_seed(202, seed_salt);
    config.seeds.training = mix_seed(303, seed_salt);
    config.seeds.eval = mix_seed(404, seed_salt);
    return config;
}

struct MethodMeans {
    double nn = 0.0;
    double srcs = 0.0;
    double bb_aware = 0.0;
};

MethodMeans evaluate_homo(const nn::DenseNet& student, const bench::PipelineConfig& config,
                          const runtime::BudgetPlan& plan, int runs, int frames,
                          int eval_jumps) {
    bench::PipelineConfig eval_config = config;
    eval_config.jumps = eval_jumps;
    const markov::TransitionSpec spec = bench::workload_spec(eval_config);
    const double n_max = bench::population_bound(config.setting, config.num_types);
    MethodMeans means;
    for (int r = 0; r < runs; ++r) {
        const std::uint64_t wseed = mix_seed(config.seeds.eval, eval_jumps, r);
        const int init = markov::draw_initial_state(spec, mix_seed(wseed, 0x100));
        const auto workload = markov::sample_series(spec, init, frames, wseed);
        const auto nn_trace = runtime::nn_online_homo(student, workload, plan, config.lof,
                                                      mix_seed(config.seeds.protocol, 1, r));
        const auto srcs_trace =
            runtime::srcs_online(workload, plan, n_max, mix_seed(config.seeds.protocol, 2, r));
        const auto aware_trace = runtime::bb_aware_online(
            workload, plan, n_max, mix_seed(config.seeds.protocol, 3, r));
        means.nn += bench::metrics_from_trace(nn_trace, n_max, "nn").mean_normalized_mse;
        means.srcs += bench::metrics_from_trace(srcs_trace, n_max, "srcs").mean_normalized_mse;
        means.bb_aware +=
            bench::metrics_from_trace(aware_trace, n_max, "bb_aware").mean_normalized_mse;
    }
    means.nn /= runs;
    means.srcs /= runs;
    means.bb_aware /= runs;
    return means;
}

// 6. Homogeneous headline ordering, 3 training seeds, >= 2 must clear 0.8x.
bool criterion_homo_headline(std::string& detail) {
    const auto start = std::chrono::steady_clock::now();
    const auto plan = runtime::equalize_homo(100, 3, 8);
    std::vector<bench::Pipeline> pipelines(3);
    std::vector<bench::PipelineConfig> configs;
    for (int seed = 0; seed < 3; ++seed) configs.push_back(homo_desk_config(100, seed));

    std::vector<std::function<void()>> tasks;
    for (int seed = 0; seed < 3; ++seed)
        tasks.push_back([&, seed] { pipelines[seed] = bench::train_pipeline(configs[seed]); });
    bench::parallel_tasks(std::move(tasks), 0);

    int cleared = 0;
    std::string parts;
    for (int seed = 0; seed < 3; ++seed) {
        const auto means =
            evaluate_homo(pipelines[seed].student, configs[seed], plan, 5, 500, 5);
        const bool pass = means.nn < 0.8 * means.srcs && means.nn < 0.8 * means.bb_aware;
        cleared += pass;
        parts += fmt(" seed%d: nn=%.5f srcs=%.5f aware=%.5f %s", seed, means.nn, means.srcs,
                     means.bb_aware, pass ? "ok" : "MISS");
    }
    detail = fmt("%s, %.0f s", parts.c_str(), elapsed_s(start));
    return cleared >= 2;
}

// 7. Budget monotonicity across {50, 100, 150} within one pooled std.
bool criterion_budget_monotonicity(std::string& detail) {
    const auto start = std::chrono::steady_clock::now();
    bench::ExperimentConfig config;
    config.base = homo_desk_config(100, 7);
    config.sweep = bench::SweepVariable::TrialLength;
    config.values = {50.0, 100.0, 150.0};
    config.runs = 5;
    config.frames = 500;
    config.threads = 0;
    const auto rows = bench::run_experiment(config);

    bool ok = true;
    std::string parts;
    for (const std::string method : {"nn", "srcs", "bb_aware"}) {
        std::vector<const bench::ResultRow*> series;
        for (const auto& row : rows)
            if (row.method == method) series.push_back(&row);
        double pooled = 0.0;
        for (const auto* row : series) pooled += row->std_mse * row->std_mse;
        pooled = std::sqrt(pooled / series.size());
        for (std::size_t i = 1; i < series.size(); ++i) {
            if (series[i]->mean_mse > series[i - 1]->mean_mse + pooled) ok = false;
        }
        parts += fmt(" %s: %.5f/%.5f/%.5f (pooled std %.5f)", method.c_str(),
                     series[0]->mean_mse, series[1]->mean_mse, series[2]->mean_mse, pooled);
    }
    detail = fmt("%s, %.0f s", parts.c_str(), elapsed_s(start));
    return ok;
}

// 8. Robustness to the jump count k for a single trained model.
// Budget choice: estimates are clamped to n_max = 64, so for budgets
// l >= 40 the participation propensity min(1, 1.6 l / n') is pinned at 1 and
// BB-Aware cannot react to its previous estimate at all -- the degradation
// mechanism under test only exists where p < 1 is reachable. Budget 36
// (p < 1 once n' > 57.6) keeps the previous-estimate feedback live.
bool criterion_k_robustness(std::string& detail) {
    const auto start = std::chrono::steady_clock::now();
    const int budget = 36;
    const auto plan = runtime::equalize_homo(budget, 3, 8);
    const auto config = homo_desk_config(budget, 8);
    const auto pipeline = bench::train_pipeline(config);

    double nn_mse[3];
    const int ks[3] = {1, 5, 10};
    for (int i = 0; i < 3; ++i)
        nn_mse[i] = evaluate_homo(pipeline.student, config, plan, 5, 500, ks[i]).nn;
    const double ratio = *std::max_element(nn_mse, nn_mse + 3) /
                         *std::min_element(nn_mse, nn_mse + 3);

    // BB-Aware needs no training; use longer runs to separate the ~25%
    // degradation from run-to-run noise.
    double aware_mse[2] = {0.0, 0.0};
    const int aware_ks[2] = {1, 10};
    const double n_max = 64.0;
    for (int i = 0; i < 2; ++i) {
        bench::PipelineConfig eval_config = config;
        eval_config.jumps = aware_ks[i];
        const markov::TransitionSpec spec = bench::workload_spec(eval_config);
        const int runs = 10, frames = 1000;
        for (int r = 0; r < runs; ++r) {
            const std::uint64_t wseed = mix_seed(config.seeds.eval, aware_ks[i], 50 + r);
            const int init = markov::draw_initial_state(spec, mix_seed(wseed, 0x100));
            const auto workload = markov::sample_series(spec, init, frames, wseed);
            const auto trace = runtime::bb_aware_online(workload, plan, n_max,
                                                        mix_seed(config.seeds.protocol, 3, r));
            aware_mse[i] +=
                bench::metrics_from_trace(trace, n_max, "bb_aware").mean_normalized_mse;
        }
        aware_mse[i] /= runs;
    }
    const bool aware_degrades = aware_mse[1] > aware_mse[0];
    detail = fmt(
        "budget 36: nn mse k=1/5/10: %.5f/%.5f/%.5f (ratio %.2f); bb_aware k=1 %.5f -> k=10 %.5f, %.0f s",
        nn_mse[0], nn_mse[1], nn_mse[2], ratio, aware_mse[0], aware_mse[1], elapsed_s(start));
    return ratio < 2.0 && aware_degrades;
}

// 9. Alpha sweep: distillation at 0.5 beats blind training at 1.0.
bool criterion_alpha_sweep(std::string& detail) {
    const auto start = std::chrono::steady_clock::now();
    bench::ExperimentConfig config;
    config.base = homo_desk_config(100, 9);
    config.sweep = bench::SweepVariable::Alpha;
    config.values = {0.5, 1.0};
    config.runs = 3;  // three training seeds
    config.threads = 0;
    const auto rows = bench::run_experiment(config);
    const double at_half = rows[0].mean_mse;
    const double at_one = rows[1].mean_mse;
    detail = fmt("mean test data MSE alpha=0.5: %.6f, alpha=1.0: %.6f, %.0f s", at_half,
                 at_one, elapsed_s(start));
    return at_half < at_one;
}

// ---------------------------------------------------------------------------
// 10. Heterogeneous headline at T=3 with exact budget equalization.
bool criterion_hetero_headline(std::string& detail) {
    const auto start = std::chrono::steady_clock::now();
    const auto plan = runtime::equalize_hetero(100, 3, 3, 8);
    if (plan.srcs.l_bb != 43 || plan.bb_aware.l != 67) {
        detail = fmt("equalize_hetero produced l_srcs=%d l_bbaware=%d, expected 43/67",
                     plan.srcs.l_bb, plan.bb_aware.l);
        return false;
    }

    std::vector<bench::Pipeline> pipelines(3);
    std::vector<bench::PipelineConfig> configs;
    for (int seed = 0; seed < 3; ++seed) {
        bench::PipelineConfig config = homo_desk_config(100, 100 + seed);
        config.setting = pfd::Setting::Heterogeneous;
        config.num_types = 3;
        config.dataset_frames = 2000;
        configs.push_back(config);
    }
    std::vector<std::function<void()>> tasks;
    for (int seed = 0; seed < 3; ++seed)
        tasks.push_back([&, seed] { pipelines[seed] = bench::train_pipeline(configs[seed]); });
    bench::parallel_tasks(std::move(tasks), 0);

    const double n_max = bench::population_bound(pfd::Setting::Heterogeneous, 3);
    int cleared = 0;
    std::string parts;
    for (int seed = 0; seed < 3; ++seed) {
        const auto& config = configs[seed];
        const markov::TransitionSpec spec = bench::workload_spec(config);
        double nn_mse = 0.0, srcs_mse = 0.0, aware_mse = 0.0;
        const int runs = 5, frames = 500;
        for (int r = 0; r < runs; ++r) {
            const std::uint64_t wseed = mix_seed(config.seeds.eval, 5, r);
            std::vector<std::uint64_t> type_seeds(3);
            std::vector<int> initials(3);
            for (int b = 0; b < 3; ++b) {
                type_seeds[b] = mix_seed(wseed, b);
                initials[b] = markov::draw_initial_state(spec, mix_seed(wseed, 0x100 + b));
            }
            const auto workload = markov::sample_hetero(spec, 3, type_seeds, initials, frames);
            const auto nn_trace = runtime::nn_online_hetero(
                pipelines[seed].student, workload, plan, config.lof,
                mix_seed(config.seeds.protocol, 1, r));
            const auto srcs_trace = runtime::t_srcs_online(
                workload, plan, n_max, mix_seed(config.seeds.protocol, 2, r));
            const auto aware_trace = runtime::t_bb_aware_online(
                workload, plan, n_max, mix_seed(config.seeds.protocol, 3, r));
            nn_mse += bench::metrics_from_trace(nn_trace, n_max, "nn").mean_normalized_mse;
            srcs_mse +=
                bench::metrics_from_trace(srcs_trace, n_max, "t_srcs").mean_normalized_mse;
            aware_mse += bench::metrics_from_trace(aware_trace, n_max, "t_bb_aware")
                             .mean_normalized_mse;
        }
        nn_mse /= runs;
        srcs_mse /= runs;
        aware_mse /= runs;
        const bool pass = nn_mse < 0.8 * srcs_mse && nn_mse < 0.8 * aware_mse;
        cleared += pass;
        parts += fmt(" seed%d: nn=%.5f t_srcs=%.5f t_aware=%.5f %s", seed, nn_mse, srcs_mse,
                     aware_mse, pass ? "ok" : "MISS");
    }
    detail = fmt("%s, %.0f s", parts.c_str(), elapsed_s(start));
    return cleared >= 2;
}

// ---------------------------------------------------------------------------
// 11. Budget parity audit: per-frame slot counters match the plan exactly.
bool criterion_budget_parity(std::string& detail) {
    const auto homo_plan = runtime::equalize_homo(100, 3, 8);
    markov::TransitionSpec spec{65, 0.2, 5};
    const auto workload = markov::sample_series(spec, 20, 200, 77);

    // an untrained student suffices; the audit is about slot counters
    const auto student = nn::init_net(nn::mlp_dims(3 * 100 + 1, 1), nn::mlp_activations(),
                                      1, {64.0, 1});
    const auto nn_trace = runtime::nn_online_homo(student, workload, homo_plan, {}, 1);
    const auto srcs_trace = runtime::srcs_online(workload, homo_plan, 64.0, 2);
    const auto aware_trace = runtime::bb_aware_online(workload, homo_plan, 64.0, 3);
    for (std::size_t t = 1; t < workload.values.size(); ++t) {
        if (nn_trace.slots_used[t] != 100 || srcs_trace.slots_used[t] != 100 ||
            aware_trace.slots_used[t] != 100) {
            detail = fmt("homogeneous slot mismatch at frame %zu", t);
            return false;
        }
    }

    const auto het_plan = runtime::equalize_hetero(100, 3, 3, 8);
    markov::TransitionSpec het_spec{65, 0.2, 5};
    const auto het_workload =
        markov::sample_hetero(het_spec, 3, {1, 2, 3}, {10, 20, 30}, 100);
    const auto het_student = nn::init_net(nn::mlp_dims(4 * 2 * 100 + 3, 3),
                                          nn::mlp_activations(), 2, {64.0, 3});
    const auto het_nn =
        runtime::nn_online_hetero(het_student, het_workload, het_plan, {}, 4);
    const auto het_srcs = runtime::t_srcs_online(het_workload, het_plan, 64.0, 5);
    const auto het_aware = runtime::t_bb_aware_online(het_workload, het_plan, 64.0, 6);
    for (std::size_t t = 1; t < het_workload.num_frames(); ++t) {
        if (het_nn.slots_used[t] != 200) {
            detail = fmt("hetero nn slot mismatch at frame %zu", t);
            return false;
        }
        if (het_srcs.slots_used[t] != 3 * (24 + 43)) {
            detail = fmt("hetero t_srcs slot mismatch at frame %zu", t);
            return false;
        }
        if (het_aware.slots_used[t] != 3 * 67) {
            detail = fmt("hetero t_bb_aware slot mismatch at frame %zu", t);
            return false;
        }
    }
    detail = "homogeneous 100/100/100; hetero 200/201/201 per plan, zero tolerance";
    return true;
}

// ---------------------------------------------------------------------------
// 12. Serialization round-trips are bit-exact.
bool criterion_serialization(std::string& detail) {
    const auto dir = std::filesystem::temp_directory_path();

    // model weights
    auto net = nn::init_net(nn::mlp_dims(31, 1), nn::mlp_activations(), 3, {64.0, 1});
    const auto net_path = dir / "cardest_acc_net.json";
    nn::save_net(net, net_path);
    const auto net2 = nn::load_net(net_path);
    const bool net_ok = net2.weights == net.weights && net2.biases == net.biases &&
                        net2.layer_dims == net.layer_dims;

    // dataset
    markov::TransitionSpec spec{65, 0.2, 5};
    const auto w = markov::sample_series(spec, 12, 41, 99);
    const auto dataset = pfd::gen_teacher_training_data(w, 10, {}, {1e-3, 1, 5}, 6, 64.0);
    const auto data_path = dir / "cardest_acc_data.jsonl";
    pfd::save_dataset_jsonl(dataset, data_path);
    const auto dataset2 = pfd::load_dataset_jsonl(data_path);
    bool data_ok = dataset2.records.size() == dataset.records.size();
    for (std::size_t i = 0; data_ok && i < dataset.records.size(); ++i) {
        data_ok = dataset2.records[i].teacher_features.values ==
                      dataset.records[i].teacher_features.values &&
                  dataset2.records[i].target == dataset.records[i].target &&
                  dataset2.records[i].rough_estimates == dataset.records[i].rough_estimates;
    }

    // results
    const std::vector<bench::ResultRow> rows = {{100.0, "nn", 0.12345678901234567, 0.25, 5, 500}};
    const auto results_path = dir / "cardest_acc_results.csv";
    bench::emit_results(rows, bench::ResultFormat::Csv, results_path);
    const auto rows2 = bench::load_results_csv(results_path);
    const bool results_ok = rows2.size() == 1 && rows2[0].mean_mse == rows[0].mean_mse &&
                            rows2[0].std_mse == rows[0].std_mse &&
                            rows2[0].method == rows[0].method;

    std::filesystem::remove(net_path);
    std::filesystem::remove(data_path);
    std::filesystem::remove(data_path.string() + ".meta.json");
    std::filesystem::remove(results_path);

    detail = fmt("weights %s, dataset %s, results %s", net_ok ? "exact" : "MISMATCH",
                 data_ok ? "exact" : "MISMATCH", results_ok ? "exact" : "MISMATCH");
    return net_ok && data_ok && results_ok;
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

    const std::vector<Criterion> criteria = {
        {1, "gradient correctness vs finite differences", criterion_gradients},
        {2, "distillation-loss identities and affinity", criterion_distill_identities},
        {3, "BB estimator consistency (occupancy oracle)", criterion_bb_consistency},
        {4, "SRC_s accuracy guarantee coverage", criterion_srcs_coverage},
        {5, "DTMC k-step fidelity", criterion_dtmc_fidelity},
        {6, "homogeneous headline ordering at budget 100", criterion_homo_headline},
        {7, "budget monotonicity across {50,100,150}", criterion_budget_monotonicity},
        {8, "robustness to k for a single model", criterion_k_robustness},
        {9, "alpha sweep: 0.5 beats 1.0", criterion_alpha_sweep},
        {10, "heterogeneous headline at T=3", criterion_hetero_headline},
        {11, "budget parity audit", criterion_budget_parity},
        {12, "serialization round-trips bit-exact", criterion_serialization},
    };

    int failures = 0;
    for (const auto& criterion : criteria) {
        if (!selected.empty() && !selected.count(criterion.id)) continue;
        std::string detail;
        bool pass = false;
        try {
            pass = criterion.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        std::printf("[%s] criterion %2d: %s — %s\n", pass ? "PASS" : "FAIL", criterion.id,
                    criterion.label, detail.c_str());
        std::fflush(stdout);
        if (!pass) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
