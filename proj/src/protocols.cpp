#include "cardest/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace cardest::proto {

namespace {

constexpr double kLofConstant = 1.2897;

}  // namespace

char outcome_char(SlotOutcome o) {
    switch (o) {
        case SlotOutcome::Empty: return '0';
        case SlotOutcome::Alpha: return 'a';
        case SlotOutcome::Beta: return 'b';
        case SlotOutcome::Collision: return 'c';
    }
    return '?';
}

LoFResult run_lof(int n_active, int l_lof, Rng& rng) {
    if (l_lof < 1) throw std::invalid_argument("run_lof: l_lof must be >= 1");
    if (n_active < 0) throw std::invalid_argument("run_lof: n_active must be >= 0");

    LoFResult result;
    result.slots_consumed = l_lof;
    result.first_empty_slot = l_lof;  // saturation when no slot is empty
    for (int slot = 1; slot <= l_lof; ++slot) {
        const int exponent = (slot < l_lof) ? slot : l_lof - 1;
        const double p = std::ldexp(1.0, -exponent);
        int transmitters = 0;
        for (int node = 0; node < n_active; ++node)
            if (rng.bernoulli(p)) ++transmitters;
        if (transmitters == 0) {
            result.first_empty_slot = slot;
            break;
        }
    }
    return result;
}

double lof_point_estimate(int j) {
    if (j < 1) throw std::invalid_argument("lof_point_estimate: j must be >= 1");
    return kLofConstant * std::ldexp(1.0, j);
}

double srcs_rough_estimate(std::span<const int> first_empty_slots) {
    if (first_empty_slots.empty())
        throw std::invalid_argument("srcs_rough_estimate: no LoF results");
    double exponent_sum = 0.0;
    for (int j : first_empty_slots) exponent_sum += j - 1;
    return kLofConstant * std::pow(2.0, exponent_sum / static_cast<double>(first_empty_slots.size()));
}

BBTrialResult run_bb(int n_active, int l, double rough, Rng& rng) {
    if (l < 1) throw std::invalid_argument("run_bb: l must be >= 1");
    if (rough <= 0.0) throw std::invalid_argument("run_bb: rough estimate must be > 0");
    if (n_active < 0) throw std::invalid_argument("run_bb: n_active must be >= 0");

    BBTrialResult trial;
    trial.length = l;
    trial.participation_prob = std::min(1.0, 1.6 * l / rough);
    trial.counts.assign(l, 0);
    for (int node = 0; node < n_active; ++node) {
        if (!rng.bernoulli(trial.participation_prob)) continue;
        ++trial.counts[rng.uniform_int(0, l - 1)];
    }
    trial.outcomes.resize(l);
    for (int slot = 0; slot < l; ++slot) {
        const int c = trial.counts[slot];
        trial.outcomes[slot] = c == 0   ? SlotOutcome::Empty
                               : c == 1 ? SlotOutcome::Alpha
                                        : SlotOutcome::Collision;
    }
    return trial;
}

int count_empty(const BBTrialResult& trial) {
    return static_cast<int>(
        std::count(trial.outcomes.begin(), trial.outcomes.end(), SlotOutcome::Empty));
}

double bb_estimate(int z, int l, double p, double fallback, double n_max) {
    if (l < 1) throw std::invalid_argument("bb_estimate: l must be >= 1");
    if (z < 0 || z > l) throw std::invalid_argument("bb_estimate: z must lie in [0, l]");
    if (p <= 0.0 || p > 1.0)
        throw std::invalid_argument("bb_estimate: p must lie in (0, 1]");

    if (z == 0) return std::clamp(fallback, 0.0, n_max);
    const double raw = std::log(static_cast<double>(z) / l) / std::log1p(-p / l);
    return std::clamp(raw, 0.0, n_max);
}

SrcsFrameResult srcs_frame(int n_active, int num_lof, int l_lof, int l_bb,
                           double n_max, Rng& rng) {
    if (num_lof < 1) throw std::invalid_argument("srcs_frame: num_lof must be >= 1");

    std::vector<int> first_empties;
    first_empties.reserve(num_lof);
    for (int m = 0; m < num_lof; ++m)
        first_empties.push_back(run_lof(n_active, l_lof, rng).first_empty_slot);
    const double rough = srcs_rough_estimate(first_empties);

    const BBTrialResult trial = run_bb(n_active, l_bb, rough, rng);
    SrcsFrameResult result;
    result.estimate =
        bb_estimate(count_empty(trial), l_bb, trial.participation_prob, rough, n_max);
    result.slots_used = num_lof * l_lof + l_bb;
    return result;
}

int srcs_bb_length(double epsilon) {
    if (epsilon <= 0.0) throw std::invalid_argument("srcs_bb_length: epsilon must be > 0");
    const double raw = 65.0 / std::pow(1.0 - std::pow(0.04, epsilon), 2.0);
    return std::max(1, static_cast<int>(std::floor(raw + 0.5)));
}

std::vector<SlotOutcome> symbol_pattern(int node_type, int num_types) {
    if (num_types < 2) throw std::invalid_argument("symbol_pattern: num_types must be >= 2");
    if (node_type < 1 || node_type > num_types)
        throw std::invalid_argument("symbol_pattern: node_type out of range");

    std::vector<SlotOutcome> pattern(num_types - 1, SlotOutcome::Empty);
    if (node_type == 1) {
        std::fill(pattern.begin(), pattern.end(), SlotOutcome::Alpha);
    } else {
        pattern[node_type - 2] = SlotOutcome::Beta;
    }
    return pattern;
}

SlotOutcome resolve_slot(int n_alpha, int n_beta) {
    const int total = n_alpha + n_beta;
    if (total == 0) return SlotOutcome::Empty;
    if (total >= 2) return SlotOutcome::Collision;
    return n_alpha == 1 ? SlotOutcome::Alpha : SlotOutcome::Beta;
}

BlockTrialResult run_3ssbb(std::span<const int> n_active, int l,
                           std::span<const double> rough, Rng& rng) {
    const int num_types = static_cast<int>(n_active.size());
    if (num_types < 2) throw std::invalid_argument("run_3ssbb: need at least 2 node types");
    if (rough.size() != n_active.size())
        throw std::invalid_argument("run_3ssbb: rough estimates length mismatch");
    if (l < 1) throw std::invalid_argument("run_3ssbb: l must be >= 1");

    BlockTrialResult trial;
    trial.blocks = l;
    trial.num_types = num_types;
    trial.type_counts.assign(static_cast<std::size_t>(l) * num_types, 0);
    trial.participation_probs.resize(num_types);
    for (int b = 0; b < num_types; ++b) {
        if (rough[b] <= 0.0)
            throw std::invalid_argument("run_3ssbb: rough estimates must be > 0");
        trial.participation_probs[b] = std::min(1.0, 1.6 * l / rough[b]);
        for (int node = 0; node < n_active[b]; ++node) {
            if (!rng.bernoulli(trial.participation_probs[b])) continue;
            const int block = rng.uniform_int(0, l - 1);
            ++trial.type_counts[static_cast<std::size_t>(block) * num_types + b];
        }
    }

    // Type 1 puts Alpha into every slot of its block; type b >= 2 puts Beta
    // into slot b-1 only, so slot s hears Beta from type index s+1.
    const int slots_per_block = num_types - 1;
    trial.outcomes.resize(static_cast<std::size_t>(l) * slots_per_block);
    for (int block = 0; block < l; ++block) {
        const int n_alpha = trial.type_count(block, 0);
        for (int slot = 0; slot < slots_per_block; ++slot) {
            const int n_beta = trial.type_count(block, slot + 1);
            trial.outcomes[static_cast<std::size_t>(block) * slots_per_block + slot] =
                resolve_slot(n_alpha, n_beta);
        }
    }
    return trial;
}

namespace {

std::string outcome_string(const std::vector<SlotOutcome>& outcomes) {
    std::string s;
    s.reserve(outcomes.size());
    for (SlotOutcome o : outcomes) s.push_back(outcome_char(o));
    return s;
}

}  // namespace

void append_bb_trace(std::ostream& out, const BBTrialResult& trial) {
    nlohmann::json line;
    line["length"] = trial.length;
    line["participation_prob"] = trial.participation_prob;
    line["counts"] = trial.counts;
    line["outcomes"] = outcome_string(trial.outcomes);
    out << line.dump() << "\n";
}

void append_block_trace(std::ostream& out, const BlockTrialResult& trial) {
    nlohmann::json line;
    line["blocks"] = trial.blocks;
    line["num_types"] = trial.num_types;
    line["participation_probs"] = trial.participation_probs;
    line["type_counts"] = trial.type_counts;
    line["outcomes"] = outcome_string(trial.outcomes);
    out << line.dump() << "\n";
}

}  // namespace cardest::proto
