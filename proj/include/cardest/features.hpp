// Conversion of trial results into fixed-length feature vectors for the
// student (public one-hot outcomes) and teacher (privileged counts) networks.
// All entries are scaled by 1/n_max so hidden sigmoid layers train stably;
// the same scaling applies to targets and is undone at prediction.
#pragma once

#include <span>
#include <string>
#include <vector>

#include "cardest/protocols.hpp"

namespace cardest::feat {

enum class Layout : std::uint8_t { HomoStudent, HomoTeacher, HetStudent, HetTeacher };

const char* layout_name(Layout layout);
Layout layout_from_name(const std::string& name);

struct FeatureVector {
    std::vector<double> values;
    Layout layout = Layout::HomoStudent;

    std::size_t size() const { return values.size(); }
    bool empty() const { return values.empty(); }
};

/// Length 3l+1: per slot a one-hot triple (Empty, Single, Collision), then the
/// previous estimate scaled by 1/n_max. Throws std::invalid_argument if a
/// Beta outcome appears (homogeneous trials use the 3-outcome alphabet).
FeatureVector encode_bb_student(std::span<const proto::SlotOutcome> outcomes,
                                double prev_estimate, double n_max);

/// Length l+1: per-slot transmitter counts then the previous true count,
/// all scaled by 1/n_max. prev_truth is a double so frame 0 can feed the
/// LoF rough estimate through the same slot.
FeatureVector encode_bb_teacher(std::span<const int> counts, double prev_truth, double n_max);

/// Length 4(T-1)l + T: block-major slot one-hots in order
/// (Empty, Alpha, Beta, Collision), then T scaled previous estimates.
FeatureVector encode_3ssbb_student(const proto::BlockTrialResult& trial,
                                   std::span<const double> prev_estimates,
                                   double n_max_type);

/// Length (l+1)T: block-major, type-minor scaled participant counts, then T
/// scaled previous true counts.
FeatureVector encode_3ssbb_teacher(const proto::BlockTrialResult& trial,
                                   std::span<const double> prev_truths, double n_max_type);

/// Full-precision CSV row of the raw values.
std::string to_csv_row(const FeatureVector& features);

}  // namespace cardest::feat
