#include "perfsage/selector.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

#include "perfsage/errors.hpp"
#include "perfsage/rng.hpp"

namespace perfsage::selector {

std::vector<ScheduleCandidate> enumerate_candidates(const ScheduleSpace& space,
                                                    std::size_t limit,
                                                    std::uint64_t seed) {
    if (limit < 1) throw ParamError("candidate limit must be >= 1");
    auto lattice = space.enumerate_all();  // lexicographic
    if (lattice.empty()) throw DomainError("empty schedule space");
    if (limit >= lattice.size()) return lattice;
    Rng rng(derive_seed(seed, 0xCA4D));
    rng.partial_shuffle(lattice, limit);
    lattice.resize(limit);
    return lattice;
}

ScheduleCandidate select(const ScheduleScorer& scorer,
                         const std::vector<ScheduleCandidate>& candidates) {
    if (candidates.empty()) throw ParamError("select needs at least one candidate");
    const ScheduleCandidate* best = &candidates.front();
    double best_score = scorer(*best);
    for (std::size_t i = 1; i < candidates.size(); ++i) {
        const double score = scorer(candidates[i]);
        if (score < best_score ||
            (score == best_score && candidates[i] < *best)) {
            best = &candidates[i];
            best_score = score;
        }
    }
    return *best;
}

ScheduleCandidate select(const models::TrainedModel& model, std::uint32_t image_n,
                         const std::vector<ScheduleCandidate>& candidates) {
    if (model.kind != kernels::KernelKind::Blur)
        throw SchemaError("variant selection needs a model trained on the blur schema");
    return select(
        [&](const ScheduleCandidate& c) {
            const auto params = kernels::InstanceParams::blur(image_n, c);
            return models::predict(
                model, models::model_features(params, model.config.family));
        },
        candidates);
}

SelectionReport evaluate_selection(const ScheduleCandidate& chosen,
                                   const MeasuredCandidates& measured,
                                   const ScheduleCandidate& default_schedule,
                                   std::optional<double> default_runtime_s,
                                   double predicted_s) {
    if (measured.empty()) throw ParamError("no measured candidates");
    SelectionReport rep;
    rep.chosen = chosen;
    rep.predicted_s = predicted_s;
    rep.default_schedule = default_schedule;

    double sum = 0.0;
    const std::pair<ScheduleCandidate, double>* chosen_row = nullptr;
    const std::pair<ScheduleCandidate, double>* best_row = nullptr;
    const std::pair<ScheduleCandidate, double>* default_row = nullptr;
    for (const auto& row : measured) {
        if (!(row.second > 0.0)) throw DomainError("measured runtimes must be > 0");
        sum += row.second;
        if (row.first == chosen) chosen_row = &row;
        if (row.first == default_schedule) default_row = &row;
        if (best_row == nullptr || row.second < best_row->second ||
            (row.second == best_row->second && row.first < best_row->first))
            best_row = &row;
    }
    if (chosen_row == nullptr)
        throw ParamError("chosen schedule " + chosen.to_string() +
                         " has no measured runtime");
    if (!default_runtime_s && default_row == nullptr)
        throw ParamError("default schedule " + default_schedule.to_string() +
                         " has no measured runtime");

    rep.measured_s = chosen_row->second;
    rep.true_best = best_row->first;
    rep.true_best_s = best_row->second;
    rep.default_s = default_runtime_s ? *default_runtime_s : default_row->second;
    if (!(rep.default_s > 0.0)) throw DomainError("default runtime must be > 0");
    rep.regret = rep.measured_s / rep.true_best_s;
    rep.speedup_vs_default = rep.default_s / rep.measured_s;
    rep.speedup_vs_random_mean =
        (sum / static_cast<double>(measured.size())) / rep.measured_s;
    return rep;
}

namespace {

nlohmann::json schedule_json(const ScheduleCandidate& c) {
    return {{"s1", c.s1}, {"s2", c.s2}, {"s3", c.s3}, {"s4", c.s4}};
}

}  // namespace

std::string SelectionReport::to_json() const {
    nlohmann::json j;
    j["chosen"] = schedule_json(chosen);
    j["predicted_s"] = predicted_s;
    j["measured_s"] = measured_s;
    j["true_best"] = schedule_json(true_best);
    j["true_best_s"] = true_best_s;
    j["default_schedule"] = schedule_json(default_schedule);
    j["default_s"] = default_s;
    j["regret"] = regret;
    j["speedup_vs_default"] = speedup_vs_default;
    j["speedup_vs_random_mean"] = speedup_vs_random_mean;
    return j.dump(2);
}

std::string SelectionReport::summary() const {
    std::ostringstream os;
    os << "chosen schedule   " << chosen.to_string() << "  measured "
       << measured_s << " s (predicted " << predicted_s << " s)\n"
       << "true best         " << true_best.to_string() << "  " << true_best_s
       << " s  (regret " << regret << "x)\n"
       << "default schedule  " << default_schedule.to_string() << "  " << default_s
       << " s  (speedup vs default " << speedup_vs_default << "x)\n"
       << "speedup vs mean candidate: " << speedup_vs_random_mean << "x";
    return os.str();
}

}  // namespace perfsage::selector
