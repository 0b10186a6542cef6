#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "perfsage/kernels.hpp"
#include "perfsage/models.hpp"

namespace perfsage::selector {

using kernels::ScheduleCandidate;
using kernels::ScheduleSpace;

/// Uniform sample without replacement from the legal lattice; when limit
/// covers the whole lattice the result is the exhaustive enumeration in
/// lexicographic order.
std::vector<ScheduleCandidate> enumerate_candidates(const ScheduleSpace& space,
                                                    std::size_t limit,
                                                    std::uint64_t seed);

/// Predicted runtime of a schedule, in seconds.
using ScheduleScorer = std::function<double(const ScheduleCandidate&)>;

/// argmin of predicted runtime over the candidates; ties go to the
/// lexicographically smallest schedule.
ScheduleCandidate select(const ScheduleScorer& scorer,
                         const std::vector<ScheduleCandidate>& candidates);

/// Scores with a trained blur model on image side n.
ScheduleCandidate select(const models::TrainedModel& model, std::uint32_t image_n,
                         const std::vector<ScheduleCandidate>& candidates);

struct SelectionReport {
    ScheduleCandidate chosen;
    double predicted_s = 0.0;
    double measured_s = 0.0;
    ScheduleCandidate true_best;
    double true_best_s = 0.0;
    ScheduleCandidate default_schedule;
    double default_s = 0.0;
    double regret = 0.0;               // measured_s / true_best_s
    double speedup_vs_default = 0.0;   // default_s / measured_s
    double speedup_vs_random_mean = 0.0;  // mean candidate runtime / measured_s

    std::string to_json() const;
    std::string summary() const;
};

using MeasuredCandidates = std::vector<std::pair<ScheduleCandidate, double>>;

/// Fill regret and speedups from measured runtimes. The chosen schedule must
/// appear in `measured`; the default's runtime is looked up there unless
/// supplied explicitly.
SelectionReport evaluate_selection(const ScheduleCandidate& chosen,
                                   const MeasuredCandidates& measured,
                                   const ScheduleCandidate& default_schedule,
                                   std::optional<double> default_runtime_s = {},
                                   double predicted_s = 0.0);

}  // namespace perfsage::selector
