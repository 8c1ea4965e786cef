#include "cardest/markov.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace cardest::markov {

namespace {

void validate(const TransitionSpec& spec) {
    if (spec.num_states < 2)
        throw std::invalid_argument("TransitionSpec: num_states must be >= 2");
    if (spec.stay_prob < 0.0 || spec.stay_prob > 1.0)
        throw std::invalid_argument("TransitionSpec: stay_prob must lie in [0, 1]");
    if (spec.jumps < 1)
        throw std::invalid_argument("TransitionSpec: jumps must be >= 1");
}

}  // namespace

SquareMatrix build_tpm(const TransitionSpec& spec) {
    validate(spec);
    const int n = spec.num_states;
    const double q = spec.stay_prob;
    const double p = (1.0 - q) / 2.0;  // equal up/down propensity

    SquareMatrix tpm;
    tpm.n = n;
    tpm.a.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        tpm.at(i, i) = q;
        if (i == 0) {
            tpm.at(0, 1) = 1.0 - q;
        } else if (i == n - 1) {
            tpm.at(n - 1, n - 2) = 1.0 - q;
        } else {
            tpm.at(i, i - 1) = 1.0 - p - q;
            tpm.at(i, i + 1) = p;
        }
    }
    return tpm;
}

SquareMatrix matrix_power(const SquareMatrix& tpm, int k) {
    if (k < 1) throw std::invalid_argument("matrix_power: k must be >= 1");
    const int n = tpm.n;
    SquareMatrix result = tpm;
    SquareMatrix scratch;
    scratch.n = n;
    scratch.a.assign(tpm.a.size(), 0.0);
    for (int step = 1; step < k; ++step) {
        for (auto& v : scratch.a) v = 0.0;
        for (int i = 0; i < n; ++i) {
            for (int m = 0; m < n; ++m) {
                const double r = result.at(i, m);
                if (r == 0.0) continue;
                for (int j = 0; j < n; ++j) scratch.at(i, j) += r * tpm.at(m, j);
            }
        }
        std::swap(result.a, scratch.a);
    }
    return result;
}

NodeCountSeries sample_series(const TransitionSpec& spec, int initial_state,
                              int num_frames, std::uint64_t seed) {
    validate(spec);
    if (initial_state < 0 || initial_state >= spec.num_states)
        throw std::invalid_argument("sample_series: initial_state out of range");
    if (num_frames < 1)
        throw std::invalid_argument("sample_series: num_frames must be >= 1");

    const SquareMatrix pk = matrix_power(build_tpm(spec), spec.jumps);
    Rng rng(seed);

    NodeCountSeries series;
    series.values.reserve(num_frames);
    series.values.push_back(initial_state);
    int state = initial_state;
    for (int t = 1; t < num_frames; ++t) {
        const double u = rng.uniform01();
        double cdf = 0.0;
        int next = spec.num_states - 1;  // guards against cdf rounding short of 1
        for (int j = 0; j < spec.num_states; ++j) {
            cdf += pk.at(state, j);
            if (u < cdf) {
                next = j;
                break;
            }
        }
        state = next;
        series.values.push_back(state);
    }
    return series;
}

HeteroSeries sample_hetero(const TransitionSpec& spec, int num_types,
                           const std::vector<std::uint64_t>& seeds,
                           const std::vector<int>& initial_states, int num_frames) {
    if (num_types < 2)
        throw std::invalid_argument("sample_hetero: num_types must be >= 2");
    if (seeds.size() != static_cast<std::size_t>(num_types) ||
        initial_states.size() != static_cast<std::size_t>(num_types))
        throw std::invalid_argument("sample_hetero: seeds/initial_states length mismatch");

    HeteroSeries hetero;
    hetero.per_type.reserve(num_types);
    for (int b = 0; b < num_types; ++b)
        hetero.per_type.push_back(sample_series(spec, initial_states[b], num_frames, seeds[b]));
    return hetero;
}

int draw_initial_state(const TransitionSpec& spec, std::uint64_t seed) {
    validate(spec);
    Rng rng(seed);
    return rng.uniform_int(0, spec.num_states - 1);
}

void write_series_csv(const std::filesystem::path& path, const HeteroSeries& series) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << "frame";
    for (int b = 0; b < series.num_types(); ++b) out << ",type_" << b;
    out << "\n";
    for (std::size_t t = 0; t < series.num_frames(); ++t) {
        out << t;
        for (const auto& type_series : series.per_type) out << ',' << type_series.values[t];
        out << "\n";
    }
}

HeteroSeries read_series_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty series csv: " + path.string());

    int num_types = 0;
    for (char c : line)
        if (c == ',') ++num_types;
    if (num_types < 1) throw std::runtime_error("malformed series csv header: " + line);

    HeteroSeries series;
    series.per_type.resize(num_types);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        std::getline(row, cell, ',');  // frame index, implied by position
        for (int b = 0; b < num_types; ++b) {
            if (!std::getline(row, cell, ','))
                throw std::runtime_error("short row in series csv: " + line);
            series.per_type[b].values.push_back(std::stoi(cell));
        }
    }
    return series;
}

}  // namespace cardest::markov
