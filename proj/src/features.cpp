#include "cardest/features.hpp"

#include <charconv>
#include <stdexcept>

namespace cardest::feat {

const char* layout_name(Layout layout) {
    switch (layout) {
        case Layout::HomoStudent: return "homo_student";
        case Layout::HomoTeacher: return "homo_teacher";
        case Layout::HetStudent: return "het_student";
        case Layout::HetTeacher: return "het_teacher";
    }
    return "unknown";
}

Layout layout_from_name(const std::string& name) {
    if (name == "homo_student") return Layout::HomoStudent;
    if (name == "homo_teacher") return Layout::HomoTeacher;
    if (name == "het_student") return Layout::HetStudent;
    if (name == "het_teacher") return Layout::HetTeacher;
    throw std::invalid_argument("unknown feature layout: " + name);
}

FeatureVector encode_bb_student(std::span<const proto::SlotOutcome> outcomes,
                                double prev_estimate, double n_max) {
    if (n_max <= 0.0) throw std::invalid_argument("encode_bb_student: n_max must be > 0");

    FeatureVector fv;
    fv.layout = Layout::HomoStudent;
    fv.values.assign(3 * outcomes.size() + 1, 0.0);
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        int pos;
        switch (outcomes[i]) {
            case proto::SlotOutcome::Empty: pos = 0; break;
            case proto::SlotOutcome::Alpha: pos = 1; break;
            case proto::SlotOutcome::Collision: pos = 2; break;
            default:
                throw std::invalid_argument(
                    "encode_bb_student: 4-outcome symbol in homogeneous input");
        }
        fv.values[3 * i + pos] = 1.0;
    }
    fv.values.back() = prev_estimate / n_max;
    return fv;
}

FeatureVector encode_bb_teacher(std::span<const int> counts, double prev_truth, double n_max) {
    if (n_max <= 0.0) throw std::invalid_argument("encode_bb_teacher: n_max must be > 0");

    FeatureVector fv;
    fv.layout = Layout::HomoTeacher;
    fv.values.reserve(counts.size() + 1);
    for (int c : counts) {
        if (c < 0) throw std::invalid_argument("encode_bb_teacher: negative count");
        fv.values.push_back(c / n_max);
    }
    fv.values.push_back(prev_truth / n_max);
    return fv;
}

FeatureVector encode_3ssbb_student(const proto::BlockTrialResult& trial,
                                   std::span<const double> prev_estimates,
                                   double n_max_type) {
    if (n_max_type <= 0.0)
        throw std::invalid_argument("encode_3ssbb_student: n_max_type must be > 0");
    if (prev_estimates.size() != static_cast<std::size_t>(trial.num_types))
        throw std::invalid_argument("encode_3ssbb_student: prev_estimates length mismatch");

    FeatureVector fv;
    fv.layout = Layout::HetStudent;
    fv.values.assign(4 * trial.outcomes.size() + prev_estimates.size(), 0.0);
    for (std::size_t i = 0; i < trial.outcomes.size(); ++i)
        fv.values[4 * i + static_cast<int>(trial.outcomes[i])] = 1.0;
    const std::size_t tail = 4 * trial.outcomes.size();
    for (std::size_t b = 0; b < prev_estimates.size(); ++b)
        fv.values[tail + b] = prev_estimates[b] / n_max_type;
    return fv;
}

FeatureVector encode_3ssbb_teacher(const proto::BlockTrialResult& trial,
                                   std::span<const double> prev_truths, double n_max_type) {
    if (n_max_type <= 0.0)
        throw std::invalid_argument("encode_3ssbb_teacher: n_max_type must be > 0");
    if (prev_truths.size() != static_cast<std::size_t>(trial.num_types))
        throw std::invalid_argument("encode_3ssbb_teacher: prev_truths length mismatch");

    FeatureVector fv;
    fv.layout = Layout::HetTeacher;
    fv.values.reserve(trial.type_counts.size() + prev_truths.size());
    for (int c : trial.type_counts) fv.values.push_back(c / n_max_type);
    for (double truth : prev_truths) fv.values.push_back(truth / n_max_type);
    return fv;
}

std::string to_csv_row(const FeatureVector& features) {
    std::string row;
    char buf[32];
    for (std::size_t i = 0; i < features.values.size(); ++i) {
        if (i != 0) row.push_back(',');
        auto [end, ec] = std::to_chars(buf, buf + sizeof buf, features.values[i]);
        row.append(buf, end);
    }
    return row;
}

}  // namespace cardest::feat
