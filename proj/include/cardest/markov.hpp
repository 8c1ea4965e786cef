// Birth-death DTMC workload generation: ground-truth active-node time series
// for one node type or T independent types.
#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "cardest/rng.hpp"

namespace cardest::markov {

/// Birth-death chain over states 0..N-1. Staying puts with probability q;
/// the remaining mass splits evenly between the neighbours (all of it goes
/// inward at the two boundary states). The workload advances k chain steps
/// per time frame.
struct TransitionSpec {
    int num_states = 65;
    double stay_prob = 0.2;
    int jumps = 5;
};

struct SquareMatrix {
    int n = 0;
    std::vector<double> a;  // row-major n x n

    double& at(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
    double at(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
};

struct NodeCountSeries {
    std::vector<int> values;  // one active-node count per frame
};

struct HeteroSeries {
    std::vector<NodeCountSeries> per_type;  // independent chains, equal length

    int num_types() const { return static_cast<int>(per_type.size()); }
    std::size_t num_frames() const { return per_type.empty() ? 0 : per_type.front().values.size(); }
};

/// One-step transition matrix of the spec. Rows sum to 1 within 1e-12.
/// Throws std::invalid_argument for N < 2 or q outside [0, 1].
SquareMatrix build_tpm(const TransitionSpec& spec);

/// Repeated matrix product P^k, k >= 1.
SquareMatrix matrix_power(const SquareMatrix& tpm, int k);

/// Frame series driven by P^jumps. values[0] = initial_state; deterministic
/// given seed. Throws std::invalid_argument if initial_state is out of range.
NodeCountSeries sample_series(const TransitionSpec& spec, int initial_state,
                              int num_frames, std::uint64_t seed);

/// T independent chains. seeds and initial_states must each have length T.
HeteroSeries sample_hetero(const TransitionSpec& spec, int num_types,
                           const std::vector<std::uint64_t>& seeds,
                           const std::vector<int>& initial_states, int num_frames);

/// Seeded uniform draw over [0, N-1], the default initial state.
int draw_initial_state(const TransitionSpec& spec, std::uint64_t seed);

// CSV rows are `frame,type_0,...,type_{T-1}` (single type_0 column when
// homogeneous).
void write_series_csv(const std::filesystem::path& path, const HeteroSeries& series);
HeteroSeries read_series_csv(const std::filesystem::path& path);

inline HeteroSeries as_hetero(NodeCountSeries series) {
    HeteroSeries h;
    h.per_type.push_back(std::move(series));
    return h;
}

}  // namespace cardest::markov
