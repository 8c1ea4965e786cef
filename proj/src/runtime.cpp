#include "cardest/runtime.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fstream>

namespace cardest::runtime {

namespace {

int round_half_up(double x) { return static_cast<int>(std::floor(x + 0.5)); }

double floored_rough(double prediction) { return std::max(1.0, prediction); }

void push_frame(RunTrace& trace, std::vector<double> truth, std::vector<double> estimate,
                std::vector<double> rough, int slots) {
    double sq = 0.0;
    for (std::size_t b = 0; b < truth.size(); ++b) {
        const double d = estimate[b] - truth[b];
        sq += d * d;
    }
    trace.truth.push_back(std::move(truth));
    trace.estimates.push_back(std::move(estimate));
    trace.rough_used.push_back(std::move(rough));
    trace.sq_error.push_back(sq);
    trace.slots_used.push_back(slots);
}

std::vector<double> lof_rough_per_type(std::span<const int> n_active, int num_lof, int l_lof,
                                       Rng& rng) {
    std::vector<double> rough(n_active.size());
    std::vector<int> first_empties(num_lof);
    for (std::size_t b = 0; b < n_active.size(); ++b) {
        for (int m = 0; m < num_lof; ++m)
            first_empties[m] = proto::run_lof(n_active[b], l_lof, rng).first_empty_slot;
        rough[b] = proto::srcs_rough_estimate(first_empties);
    }
    return rough;
}

}  // namespace

BudgetPlan equalize_homo(int total_slots, int num_lof, int l_lof) {
    if (num_lof < 1 || l_lof < 1)
        throw std::invalid_argument("equalize_homo: num_lof and l_lof must be >= 1");
    const int overhead = num_lof * l_lof;
    if (total_slots <= overhead)
        throw std::invalid_argument("equalize_homo: budget too small for LoF overhead");

    BudgetPlan plan;
    plan.setting = BudgetPlan::Setting::Homogeneous;
    plan.total_slots_per_frame = total_slots;
    plan.num_types = 1;
    plan.nn.l_bb = total_slots;
    plan.srcs = {num_lof, l_lof, total_slots - overhead};
    plan.bb_aware.l = total_slots;
    return plan;
}

BudgetPlan equalize_hetero(int l_3ssbb, int num_types, int num_lof, int l_lof) {
    if (num_types < 2) throw std::invalid_argument("equalize_hetero: need at least 2 types");
    if (l_3ssbb < 1) throw std::invalid_argument("equalize_hetero: l_3ssbb must be >= 1");
    if (num_lof < 1 || l_lof < 1)
        throw std::invalid_argument("equalize_hetero: num_lof and l_lof must be >= 1");

    const double per_type = static_cast<double>(l_3ssbb) * (num_types - 1) / num_types;
    const int l_srcs = round_half_up(per_type - num_lof * l_lof);
    if (l_srcs < 1)
        throw std::invalid_argument("equalize_hetero: budget leaves no room for the SRC_s trial");

    BudgetPlan plan;
    plan.setting = BudgetPlan::Setting::Heterogeneous;
    plan.total_slots_per_frame = l_3ssbb * (num_types - 1);
    plan.num_types = num_types;
    plan.nn.l_bb = l_3ssbb;
    plan.srcs = {num_lof, l_lof, l_srcs};
    plan.bb_aware.l = round_half_up(per_type);
    return plan;
}

RunTrace nn_online_homo(const nn::DenseNet& student, const markov::NodeCountSeries& workload,
                        const BudgetPlan& plan, pfd::LofConfig lof, std::uint64_t seed) {
    const int l = plan.nn.l_bb;
    if (student.input_dim() != 3 * l + 1 || student.output_dim() != 1)
        throw std::invalid_argument("nn_online_homo: student layout does not match plan");
    const double n_max = student.scaling.n_max;

    Rng rng(seed);
    RunTrace trace;
    double prev_prediction = 0.0;
    for (std::size_t t = 0; t < workload.values.size(); ++t) {
        Rng frame_rng = rng.fork(t);
        const int n_active = workload.values[t];
        double rough, tail;
        int slots = l;
        if (t == 0) {
            const std::vector<int> active = {n_active};
            rough = lof_rough_per_type(active, lof.num_lof, lof.l_lof, frame_rng)[0];
            tail = rough;
            slots += lof.num_lof * lof.l_lof;
        } else {
            rough = floored_rough(prev_prediction);
            tail = prev_prediction;
        }
        const proto::BBTrialResult trial = proto::run_bb(n_active, l, rough, frame_rng);
        const feat::FeatureVector fv = feat::encode_bb_student(trial.outcomes, tail, n_max);
        prev_prediction = nn::predict(student, fv)[0];
        push_frame(trace, {static_cast<double>(n_active)}, {prev_prediction}, {rough}, slots);
    }
    return trace;
}

RunTrace nn_online_hetero(const nn::DenseNet& student, const markov::HeteroSeries& workload,
                          const BudgetPlan& plan, pfd::LofConfig lof, std::uint64_t seed) {
    const int l = plan.nn.l_bb;
    const int num_types = plan.num_types;
    if (workload.num_types() != num_types)
        throw std::invalid_argument("nn_online_hetero: workload type count mismatch");
    if (student.input_dim() != 4 * (num_types - 1) * l + num_types ||
        student.output_dim() != num_types)
        throw std::invalid_argument("nn_online_hetero: student layout does not match plan");
    const double n_max = student.scaling.n_max;

    Rng rng(seed);
    RunTrace trace;
    std::vector<double> prev_prediction(num_types, 0.0);
    for (std::size_t t = 0; t < workload.num_frames(); ++t) {
        Rng frame_rng = rng.fork(t);
        std::vector<int> active(num_types);
        for (int b = 0; b < num_types; ++b) active[b] = workload.per_type[b].values[t];

        std::vector<double> rough(num_types), tail(num_types);
        int slots = (num_types - 1) * l;
        if (t == 0) {
            rough = lof_rough_per_type(active, lof.num_lof, lof.l_lof, frame_rng);
            tail = rough;
            slots += num_types * lof.num_lof * lof.l_lof;
        } else {
            for (int b = 0; b < num_types; ++b) rough[b] = floored_rough(prev_prediction[b]);
            tail = prev_prediction;
        }
        const proto::BlockTrialResult trial = proto::run_3ssbb(active, l, rough, frame_rng);
        const feat::FeatureVector fv = feat::encode_3ssbb_student(trial, tail, n_max);
        prev_prediction = nn::predict(student, fv);

        std::vector<double> truth(active.begin(), active.end());
        push_frame(trace, std::move(truth), prev_prediction, std::move(rough), slots);
    }
    return trace;
}

RunTrace srcs_online(const markov::NodeCountSeries& workload, const BudgetPlan& plan,
                     double n_max, std::uint64_t seed) {
    Rng rng(seed);
    RunTrace trace;
    for (std::size_t t = 0; t < workload.values.size(); ++t) {
        Rng frame_rng = rng.fork(t).fork(0);
        const int n_active = workload.values[t];
        const auto result = proto::srcs_frame(n_active, plan.srcs.num_lof, plan.srcs.l_lof,
                                              plan.srcs.l_bb, n_max, frame_rng);
        push_frame(trace, {static_cast<double>(n_active)}, {result.estimate}, {},
                   result.slots_used);
    }
    return trace;
}

RunTrace bb_aware_online(const markov::NodeCountSeries& workload, const BudgetPlan& plan,
                         double n_max, std::uint64_t seed) {
    Rng rng(seed);
    RunTrace trace;
    double prev_estimate = 0.0;
    for (std::size_t t = 0; t < workload.values.size(); ++t) {
        Rng frame_rng = rng.fork(t).fork(0);
        const int n_active = workload.values[t];
        if (t == 0) {
            const auto result = proto::srcs_frame(n_active, plan.srcs.num_lof, plan.srcs.l_lof,
                                                  plan.srcs.l_bb, n_max, frame_rng);
            prev_estimate = result.estimate;
            push_frame(trace, {static_cast<double>(n_active)}, {prev_estimate}, {},
                       result.slots_used);
            continue;
        }
        const double rough = floored_rough(prev_estimate);
        const proto::BBTrialResult trial =
            proto::run_bb(n_active, plan.bb_aware.l, rough, frame_rng);
        const double estimate =
            proto::bb_estimate(proto::count_empty(trial), plan.bb_aware.l,
                               trial.participation_prob, prev_estimate, n_max);
        prev_estimate = estimate;
        push_frame(trace, {static_cast<double>(n_active)}, {estimate}, {rough},
                   plan.bb_aware.l);
    }
    return trace;
}

RunTrace t_srcs_online(const markov::HeteroSeries& workload, const BudgetPlan& plan,
                       double n_max, std::uint64_t seed) {
    const int num_types = workload.num_types();
    Rng rng(seed);
    RunTrace trace;
    for (std::size_t t = 0; t < workload.num_frames(); ++t) {
        std::vector<double> truth(num_types), estimates(num_types);
        int slots = 0;
        for (int b = 0; b < num_types; ++b) {
            Rng type_rng = rng.fork(t).fork(b);
            const int n_active = workload.per_type[b].values[t];
            const auto result = proto::srcs_frame(n_active, plan.srcs.num_lof, plan.srcs.l_lof,
                                                  plan.srcs.l_bb, n_max, type_rng);
            truth[b] = n_active;
            estimates[b] = result.estimate;
            slots += result.slots_used;
        }
        push_frame(trace, std::move(truth), std::move(estimates), {}, slots);
    }
    return trace;
}

RunTrace t_bb_aware_online(const markov::HeteroSeries& workload, const BudgetPlan& plan,
                           double n_max, std::uint64_t seed) {
    const int num_types = workload.num_types();
    Rng rng(seed);
    RunTrace trace;
    std::vector<double> prev_estimate(num_types, 0.0);
    for (std::size_t t = 0; t < workload.num_frames(); ++t) {
        std::vector<double> truth(num_types), estimates(num_types), roughs;
        int slots = 0;
        for (int b = 0; b < num_types; ++b) {
            Rng type_rng = rng.fork(t).fork(b);
            const int n_active = workload.per_type[b].values[t];
            truth[b] = n_active;
            if (t == 0) {
                const auto result =
                    proto::srcs_frame(n_active, plan.srcs.num_lof, plan.srcs.l_lof,
                                      plan.srcs.l_bb, n_max, type_rng);
                estimates[b] = result.estimate;
                slots += result.slots_used;
                continue;
            }
            const double rough = floored_rough(prev_estimate[b]);
            const proto::BBTrialResult trial =
                proto::run_bb(n_active, plan.bb_aware.l, rough, type_rng);
            estimates[b] =
                proto::bb_estimate(proto::count_empty(trial), plan.bb_aware.l,
                                   trial.participation_prob, prev_estimate[b], n_max);
            roughs.push_back(rough);
            slots += plan.bb_aware.l;
        }
        prev_estimate = estimates;
        push_frame(trace, std::move(truth), std::move(estimates), std::move(roughs), slots);
    }
    return trace;
}

void write_trace_csv(const RunTrace& trace, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    const int num_types = trace.truth.empty() ? 1 : static_cast<int>(trace.truth.front().size());
    out << "frame";
    for (int b = 0; b < num_types; ++b) out << ",truth_" << b;
    for (int b = 0; b < num_types; ++b) out << ",estimate_" << b;
    out << ",sq_error,slots_used\n";
    out.precision(17);
    for (std::size_t t = 0; t < trace.num_frames(); ++t) {
        out << t;
        for (double v : trace.truth[t]) out << ',' << v;
        for (double v : trace.estimates[t]) out << ',' << v;
        out << ',' << trace.sq_error[t] << ',' << trace.slots_used[t] << "\n";
    }
}

}  // namespace cardest::runtime
