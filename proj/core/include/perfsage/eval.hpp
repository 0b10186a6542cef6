#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace perfsage::eval {

/// Mean absolute percentage error: 100/N * sum |t_i - p_i| / t_i.
/// All truths must be > 0.
double mape(std::span<const double> truth, std::span<const double> pred);

/// MAPE after dropping the floor(drop_fraction * N) samples with the
/// smallest TRUE runtime (ties broken by original index). Returns the
/// error and the number of samples kept.
struct ThresholdedMape {
    double value = 0.0;
    std::size_t n_kept = 0;
};
ThresholdedMape mape_thresholded(std::span<const double> truth,
                                 std::span<const double> pred,
                                 double drop_fraction = 0.3);

/// Spearman rank correlation: ranks ascending with average ranks for ties,
/// then rho = 1 - 6 * sum d_i^2 / (N (N^2 - 1)).
double spearman(std::span<const double> truth, std::span<const double> pred);

/// baseline_s / chosen_s; both must be > 0.
double speedup(double baseline_s, double chosen_s);

/// Average ranks (1-based, ties averaged) of v. Exposed for tests.
std::vector<double> average_ranks(std::span<const double> v);

/// Metrics of one predictor on one test set.
struct EvalReport {
    std::string kernel;
    std::string variant;
    std::string model_family;
    double mape_full = 0.0;
    double mape_thresholded = 0.0;
    double rho = 0.0;
    std::size_t n_total = 0;
    std::size_t n_kept = 0;
};

EvalReport make_report(std::span<const double> truth, std::span<const double> pred,
                       double drop_fraction = 0.3);

enum class GroupBy { Kernel, Variant, ModelFamily };

/// Mean of each metric per group, plus an "overall" row at the end.
struct AggregateRow {
    std::string group;
    double mape_full = 0.0;
    double mape_thresholded = 0.0;
    double rho = 0.0;
    std::size_t reports = 0;
};
std::vector<AggregateRow> aggregate(const std::vector<EvalReport>& reports,
                                    GroupBy group_by);

void write_reports_csv(std::ostream& os, const std::vector<EvalReport>& reports);
void print_reports(std::ostream& os, const std::vector<EvalReport>& reports);
void print_aggregate(std::ostream& os, const std::vector<AggregateRow>& rows);

}  // namespace perfsage::eval
