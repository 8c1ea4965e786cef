// Online per-frame estimation loops under equalized slot budgets: the
// student-network method, SRC_s, BB-Aware, and their per-type T variants.
#pragma once

#include <cstdint>
#include <filesystem>

#include "cardest/markov.hpp"
#include "cardest/net.hpp"
#include "cardest/pfd.hpp"

namespace cardest::runtime {

/// Per-method slot budgets for one frame. Homogeneous plans satisfy
///   nn.l_bb = srcs.num_lof*l_lof + srcs.l_bb = bb_aware.l = total.
/// Heterogeneous plans relate the block-trial length to the per-type budgets
///   l_3ssbb*(T-1) = (l_srcs + num_lof*l_lof)*T = l_bb_aware*T
/// after nearest-integer rounding of the right-hand lengths.
struct BudgetPlan {
    enum class Setting : std::uint8_t { Homogeneous, Heterogeneous };

    Setting setting = Setting::Homogeneous;
    int total_slots_per_frame = 0;
    int num_types = 1;

    struct {
        int l_bb = 0;  // BB trial length (homo) or blocks per 3-SS-BB trial (hetero)
    } nn;
    struct {
        int num_lof = 3;
        int l_lof = 8;
        int l_bb = 0;
    } srcs;
    struct {
        int l = 0;
    } bb_aware;
};

/// Homogeneous equalization: everyone gets `total_slots` per frame; SRC_s
/// spends num_lof*l_lof of them on LoF. Throws when the budget cannot cover
/// the LoF overhead.
BudgetPlan equalize_homo(int total_slots, int num_lof, int l_lof);

/// Heterogeneous equalization per the slot identities above, rounding half
/// up. Throws when the implied l_srcs would be < 1.
BudgetPlan equalize_hetero(int l_3ssbb, int num_types, int num_lof, int l_lof);

struct RunTrace {
    std::vector<std::vector<double>> truth;      // frames x T
    std::vector<std::vector<double>> estimates;  // frames x T
    std::vector<std::vector<double>> rough_used; // rough estimate fed to each frame's trial
    std::vector<double> sq_error;                // squared Euclidean error per frame
    std::vector<int> slots_used;                 // per-frame slot counter

    std::size_t num_frames() const { return estimates.size(); }
};

RunTrace nn_online_homo(const nn::DenseNet& student, const markov::NodeCountSeries& workload,
                        const BudgetPlan& plan, pfd::LofConfig lof, std::uint64_t seed);

RunTrace nn_online_hetero(const nn::DenseNet& student, const markov::HeteroSeries& workload,
                          const BudgetPlan& plan, pfd::LofConfig lof, std::uint64_t seed);

/// Independent SRC_s per frame (disjoint per-frame rng streams).
RunTrace srcs_online(const markov::NodeCountSeries& workload, const BudgetPlan& plan,
                     double n_max, std::uint64_t seed);

/// Frame 0 runs a full SRC_s; afterwards a BB trial recycles the previous
/// estimate as both rough estimate (floored at 1) and zero-empty fallback.
RunTrace bb_aware_online(const markov::NodeCountSeries& workload, const BudgetPlan& plan,
                         double n_max, std::uint64_t seed);

/// SRC_s / BB-Aware run independently per type with the per-type budget from
/// equalize_hetero. A single-type workload degenerates to the homogeneous
/// operation.
RunTrace t_srcs_online(const markov::HeteroSeries& workload, const BudgetPlan& plan,
                       double n_max, std::uint64_t seed);
RunTrace t_bb_aware_online(const markov::HeteroSeries& workload, const BudgetPlan& plan,
                           double n_max, std::uint64_t seed);

/// CSV columns: frame, truth..., estimate..., sq_error, slots_used.
void write_trace_csv(const RunTrace& trace, const std::filesystem::path& path);

}  // namespace cardest::runtime
