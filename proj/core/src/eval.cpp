#include "perfsage/eval.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <numeric>
#include <ostream>

#include "perfsage/errors.hpp"

namespace perfsage::eval {

namespace {

void check_pair(std::span<const double> truth, std::span<const double> pred) {
    if (truth.size() != pred.size())
        throw DomainError("truth and prediction lengths differ");
    if (truth.empty()) throw DomainError("metric needs at least one sample");
    for (double t : truth)
        if (!(t > 0.0)) throw DomainError("all true runtimes must be > 0");
}

}  // namespace

double mape(std::span<const double> truth, std::span<const double> pred) {
    check_pair(truth, pred);
    double acc = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i)
        acc += std::abs(truth[i] - pred[i]) / truth[i];
    return 100.0 * acc / static_cast<double>(truth.size());
}

ThresholdedMape mape_thresholded(std::span<const double> truth,
                                 std::span<const double> pred,
                                 double drop_fraction) {
    check_pair(truth, pred);
    if (drop_fraction < 0.0 || drop_fraction > 1.0)
        throw DomainError("drop fraction must lie in [0,1]");
    const std::size_t n = truth.size();
    const auto n_drop = static_cast<std::size_t>(
        std::floor(drop_fraction * static_cast<double>(n) + 1e-12));
    if (n_drop >= n) throw DomainError("threshold would drop every sample");
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (truth[a] != truth[b]) return truth[a] < truth[b];
        return a < b;
    });
    double acc = 0.0;
    for (std::size_t i = n_drop; i < n; ++i) {
        const std::size_t j = order[i];
        acc += std::abs(truth[j] - pred[j]) / truth[j];
    }
    const std::size_t kept = n - n_drop;
    return {100.0 * acc / static_cast<double>(kept), kept};
}

std::vector<double> average_ranks(std::span<const double> v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
        const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = avg;
        i = j + 1;
    }
    return ranks;
}

double spearman(std::span<const double> truth, std::span<const double> pred) {
    if (truth.size() != pred.size())
        throw DomainError("truth and prediction lengths differ");
    if (truth.size() < 2) throw DomainError("spearman needs at least two samples");
    const auto rt = average_ranks(truth);
    const auto rp = average_ranks(pred);
    const double n = static_cast<double>(truth.size());
    double d2 = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const double d = rt[i] - rp[i];
        d2 += d * d;
    }
    return 1.0 - 6.0 * d2 / (n * (n * n - 1.0));
}

double speedup(double baseline_s, double chosen_s) {
    if (!(baseline_s > 0.0) || !(chosen_s > 0.0))
        throw DomainError("speedup needs positive runtimes");
    return baseline_s / chosen_s;
}

EvalReport make_report(std::span<const double> truth, std::span<const double> pred,
                       double drop_fraction) {
    EvalReport r;
    r.mape_full = mape(truth, pred);
    const auto thr = mape_thresholded(truth, pred, drop_fraction);
    r.mape_thresholded = thr.value;
    r.n_kept = thr.n_kept;
    r.rho = spearman(truth, pred);
    r.n_total = truth.size();
    return r;
}

std::vector<AggregateRow> aggregate(const std::vector<EvalReport>& reports,
                                    GroupBy group_by) {
    if (reports.empty()) throw DomainError("nothing to aggregate");
    auto key_of = [&](const EvalReport& r) -> const std::string& {
        switch (group_by) {
            case GroupBy::Variant: return r.variant;
            case GroupBy::ModelFamily: return r.model_family;
            case GroupBy::Kernel: default: return r.kernel;
        }
    };
    std::map<std::string, AggregateRow> groups;
    AggregateRow overall;
    overall.group = "overall";
    for (const auto& r : reports) {
        auto& row = groups[key_of(r)];
        row.group = key_of(r);
        row.mape_full += r.mape_full;
        row.mape_thresholded += r.mape_thresholded;
        row.rho += r.rho;
        row.reports += 1;
        overall.mape_full += r.mape_full;
        overall.mape_thresholded += r.mape_thresholded;
        overall.rho += r.rho;
        overall.reports += 1;
    }
    std::vector<AggregateRow> out;
    auto finish = [](AggregateRow row) {
        const double n = static_cast<double>(row.reports);
        row.mape_full /= n;
        row.mape_thresholded /= n;
        row.rho /= n;
        return row;
    };
    for (auto& [key, row] : groups) out.push_back(finish(row));
    out.push_back(finish(overall));
    return out;
}

void write_reports_csv(std::ostream& os, const std::vector<EvalReport>& reports) {
    os << "kernel,variant,model_family,mape_full,mape_thresholded,rho,n_total,n_kept\n";
    os << std::setprecision(17);
    for (const auto& r : reports)
        os << r.kernel << ',' << r.variant << ',' << r.model_family << ','
           << r.mape_full << ',' << r.mape_thresholded << ',' << r.rho << ','
           << r.n_total << ',' << r.n_kept << '\n';
}

void print_reports(std::ostream& os, const std::vector<EvalReport>& reports) {
    os << std::left << std::setw(8) << "kernel" << std::setw(16) << "variant"
       << std::setw(8) << "model" << std::right << std::setw(12) << "MAPE%"
       << std::setw(12) << "MAPE30%" << std::setw(9) << "rho" << std::setw(8)
       << "kept" << '\n';
    for (const auto& r : reports) {
        os << std::left << std::setw(8) << r.kernel << std::setw(16) << r.variant
           << std::setw(8) << r.model_family << std::right << std::fixed
           << std::setprecision(2) << std::setw(12) << r.mape_full << std::setw(12)
           << r.mape_thresholded << std::setprecision(3) << std::setw(9) << r.rho
           << std::setw(7) << r.n_kept << '/' << r.n_total << '\n';
        os.unsetf(std::ios::fixed);
    }
}

void print_aggregate(std::ostream& os, const std::vector<AggregateRow>& rows) {
    os << std::left << std::setw(20) << "group" << std::right << std::setw(12)
       << "MAPE%" << std::setw(12) << "MAPE30%" << std::setw(9) << "rho"
       << std::setw(9) << "reports" << '\n';
    for (const auto& row : rows) {
        os << std::left << std::setw(20) << row.group << std::right << std::fixed
           << std::setprecision(2) << std::setw(12) << row.mape_full << std::setw(12)
           << row.mape_thresholded << std::setprecision(3) << std::setw(9) << row.rho
           << std::setw(9) << row.reports << '\n';
        os.unsetf(std::ios::fixed);
    }
}

}  // namespace perfsage::eval
