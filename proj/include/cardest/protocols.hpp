// Slot-exact simulation of LoF, Balls-and-Bins, SRC_s and the block-structured
// T-type trial, producing public slot outcomes plus privileged transmitter
// counts.
#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include "cardest/rng.hpp"

namespace cardest::proto {

/// Per-slot result. Heterogeneous trials use the full alphabet; homogeneous
/// trials use Alpha as the single-transmitter outcome and never produce Beta.
enum class SlotOutcome : std::uint8_t { Empty = 0, Alpha = 1, Beta = 2, Collision = 3 };

char outcome_char(SlotOutcome o);  // '0', 'a', 'b', 'c'

struct LoFResult {
    int first_empty_slot = 0;   // j, 1-based
    int slots_consumed = 0;     // always the configured trial length
};

struct BBTrialResult {
    std::vector<SlotOutcome> outcomes;  // l slots
    std::vector<int> counts;            // transmitters per slot (privileged)
    double participation_prob = 0.0;
    int length = 0;
};

struct BlockTrialResult {
    int blocks = 0;     // l
    int num_types = 0;  // T
    std::vector<SlotOutcome> outcomes;      // l*(T-1), block-major
    std::vector<int> type_counts;           // l*T participants, block-major (privileged)
    std::vector<double> participation_probs;  // per type

    SlotOutcome outcome(int block, int slot) const {
        return outcomes[static_cast<std::size_t>(block) * (num_types - 1) + slot];
    }
    int type_count(int block, int type_index) const {
        return type_counts[static_cast<std::size_t>(block) * num_types + type_index];
    }
};

/// One LoF trial: each active node transmits in slot i in {1..l_lof-1} with
/// probability 2^-i and in slot l_lof with probability 2^-(l_lof-1). Returns
/// the first empty slot, saturated to l_lof when no slot is empty.
LoFResult run_lof(int n_active, int l_lof, Rng& rng);

/// n' = 1.2897 * 2^j. Requires j >= 1.
double lof_point_estimate(int j);

/// Averaged rough estimate over LoF trials: 1.2897 * 2^(sum(j_m - 1)/num_lof).
double srcs_rough_estimate(std::span<const int> first_empty_slots);

/// Balls-and-bins trial: each active node participates with
/// p = min(1, 1.6 l / rough) and picks one of the l slots uniformly.
BBTrialResult run_bb(int n_active, int l, double rough, Rng& rng);

int count_empty(const BBTrialResult& trial);

/// Empty-slot inversion ln(z/l) / ln(1 - p/l), clamped to [0, n_max].
/// Returns the clamped fallback when z = 0. Throws std::invalid_argument for
/// p outside (0, 1] or z outside [0, l].
double bb_estimate(int z, int l, double p, double fallback, double n_max);

struct SrcsFrameResult {
    double estimate = 0.0;
    int slots_used = 0;
};

/// Full SRC_s frame: num_lof LoF trials, averaged rough estimate, one BB
/// refinement. slots_used = num_lof*l_lof + l_bb.
SrcsFrameResult srcs_frame(int n_active, int num_lof, int l_lof, int l_bb,
                           double n_max, Rng& rng);

/// BB trial length for relative error tolerance epsilon: 65/(1-0.04^eps)^2,
/// rounded to the nearest integer, minimum 1.
int srcs_bb_length(double epsilon);

/// Per-type transmit pattern over the T-1 slots of a block. Type 1 sends
/// Alpha in every slot; type b >= 2 sends Beta in slot b-1 and stays silent
/// elsewhere. node_type is 1-based.
std::vector<SlotOutcome> symbol_pattern(int node_type, int num_types);

/// Slot resolution: no transmission -> Empty, a single symbol -> that symbol,
/// two or more transmissions -> Collision.
SlotOutcome resolve_slot(int n_alpha, int n_beta);

/// Block trial for T node types: type-b nodes participate with
/// p_b = min(1, 1.6 l / rough[b]) and superpose their pattern into a uniform
/// random block.
BlockTrialResult run_3ssbb(std::span<const int> n_active, int l,
                           std::span<const double> rough, Rng& rng);

// JSONL trace lines for fixtures and debugging.
void append_bb_trace(std::ostream& out, const BBTrialResult& trial);
void append_block_trace(std::ostream& out, const BlockTrialResult& trial);

}  // namespace cardest::proto
