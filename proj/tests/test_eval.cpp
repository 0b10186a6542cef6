#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "perfsage/errors.hpp"
#include "perfsage/eval.hpp"
#include "perfsage/rng.hpp"

using namespace perfsage;
using namespace perfsage::eval;

namespace {

// Independent brute-force implementations used as oracles. Ranks come from
// the O(n^2) counting formulation rather than the sort used by the library.
double brute_mape(const std::vector<double>& t, const std::vector<double>& p) {
    double acc = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) acc += std::abs(t[i] - p[i]) / t[i];
    return 100.0 * acc / double(t.size());
}

double brute_mape_thresholded(std::vector<double> t, std::vector<double> p,
                              double drop) {
    const std::size_t n = t.size();
    const auto n_drop = static_cast<std::size_t>(std::floor(drop * double(n) + 1e-12));
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return t[a] < t[b]; });
    double acc = 0.0;
    for (std::size_t i = n_drop; i < n; ++i)
        acc += std::abs(t[idx[i]] - p[idx[i]]) / t[idx[i]];
    return 100.0 * acc / double(n - n_drop);
}

std::vector<double> counting_ranks(const std::vector<double>& v) {
    std::vector<double> ranks(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        std::size_t less = 0, equal = 0;
        for (std::size_t j = 0; j < v.size(); ++j) {
            less += v[j] < v[i];
            equal += v[j] == v[i];
        }
        ranks[i] = double(less) + 1.0 + double(equal - 1) / 2.0;
    }
    return ranks;
}

double brute_spearman(const std::vector<double>& t, const std::vector<double>& p) {
    const auto rt = counting_ranks(t);
    const auto rp = counting_ranks(p);
    double d2 = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) d2 += (rt[i] - rp[i]) * (rt[i] - rp[i]);
    const double n = double(t.size());
    return 1.0 - 6.0 * d2 / (n * (n * n - 1.0));
}

}  // namespace

TEST(Mape, MatchesHandComputedExamples) {
    EXPECT_DOUBLE_EQ(mape(std::vector{1.0, 2.0, 3.0}, std::vector{1.0, 2.0, 3.0}), 0.0);
    EXPECT_DOUBLE_EQ(mape(std::vector{100.0}, std::vector{90.0}), 10.0);
    EXPECT_DOUBLE_EQ(mape(std::vector{1.0, 2.0}, std::vector{2.0, 1.0}), 75.0);
}

TEST(Mape, RejectsBadInput) {
    EXPECT_THROW(mape(std::vector{1.0}, std::vector{1.0, 2.0}), DomainError);
    EXPECT_THROW(mape(std::vector<double>{}, std::vector<double>{}), DomainError);
    EXPECT_THROW(mape(std::vector{0.0}, std::vector{1.0}), DomainError);
    EXPECT_THROW(mape(std::vector{-1.0}, std::vector{1.0}), DomainError);
}

TEST(Mape, ScaleInvariant) {
    Rng rng(3);
    std::vector<double> t(20), p(20);
    for (std::size_t i = 0; i < t.size(); ++i) {
        t[i] = rng.uniform(0.1, 5.0);
        p[i] = rng.uniform(0.1, 5.0);
    }
    for (double k : {1e-6, 0.5, 3.0, 1e9}) {
        std::vector<double> ts(t), ps(p);
        for (auto& x : ts) x *= k;
        for (auto& x : ps) x *= k;
        EXPECT_NEAR(mape(ts, ps), mape(t, p), 1e-9);
    }
}

TEST(MapeThresholded, DropsFloorOfFraction) {
    std::vector<double> t(10), p(10);
    for (std::size_t i = 0; i < 10; ++i) {
        t[i] = double(i + 1);
        p[i] = double(i + 1) * 1.1;
    }
    const auto r = mape_thresholded(t, p, 0.3);
    EXPECT_EQ(r.n_kept, 7u);
    EXPECT_NEAR(r.value, 10.0, 1e-9);
}

TEST(MapeThresholded, DropZeroEqualsPlainMape) {
    Rng rng(4);
    std::vector<double> t(31), p(31);
    for (std::size_t i = 0; i < t.size(); ++i) {
        t[i] = rng.uniform(0.1, 5.0);
        p[i] = rng.uniform(0.1, 5.0);
    }
    const auto r = mape_thresholded(t, p, 0.0);
    EXPECT_EQ(r.n_kept, t.size());
    EXPECT_DOUBLE_EQ(r.value, mape(t, p));
}

TEST(MapeThresholded, DropsLowRuntimeOutlier) {
    // One tiny-runtime sample mispredicted by 5000%: full MAPE is dominated
    // by it, the thresholded metric is not.
    std::vector<double> t{1e-6, 1.0, 1.1, 1.2, 1.3, 1.4, 1.5, 1.6, 1.7, 1.8};
    std::vector<double> p(t);
    p[0] = t[0] * 51.0;  // 5000% error
    const double full = mape(t, p);
    const auto thr = mape_thresholded(t, p, 0.3);
    EXPECT_GT(full, 400.0);
    EXPECT_NEAR(thr.value, 0.0, 1e-9);
    EXPECT_EQ(thr.n_kept, 7u);
}

TEST(MapeThresholded, RejectsDroppingEverything) {
    std::vector<double> one{1.0};
    EXPECT_THROW(mape_thresholded(one, one, 1.0), DomainError);
    std::vector<double> t{1.0, 2.0};
    EXPECT_THROW(mape_thresholded(t, t, 1.0), DomainError);
    EXPECT_THROW(mape_thresholded(t, t, -0.1), DomainError);
    EXPECT_THROW(mape_thresholded(t, t, 1.5), DomainError);
}

TEST(Spearman, PerfectAndReversedCorrelation) {
    std::vector<double> t{0.1, 0.2, 0.5, 0.9};
    std::vector<double> up{1.0, 2.0, 3.0, 4.0};
    std::vector<double> down{4.0, 3.0, 2.0, 1.0};
    EXPECT_DOUBLE_EQ(spearman(t, up), 1.0);
    EXPECT_DOUBLE_EQ(spearman(t, down), -1.0);
}

TEST(Spearman, HandComputedSwap) {
    std::vector<double> t{1.0, 2.0, 3.0, 4.0};
    std::vector<double> p{1.0, 3.0, 2.0, 4.0};
    EXPECT_NEAR(spearman(t, p), 0.8, 1e-12);
}

TEST(Spearman, AverageRanksForTies) {
    std::vector<double> t{1.0, 1.0, 2.0};
    const auto ranks = average_ranks(t);
    EXPECT_DOUBLE_EQ(ranks[0], 1.5);
    EXPECT_DOUBLE_EQ(ranks[1], 1.5);
    EXPECT_DOUBLE_EQ(ranks[2], 3.0);
}

TEST(Spearman, InvariantUnderMonotoneTransforms) {
    Rng rng(5);
    std::vector<double> t(25), p(25);
    for (std::size_t i = 0; i < t.size(); ++i) {
        t[i] = rng.uniform(0.1, 9.0);
        p[i] = rng.uniform(0.1, 9.0);
    }
    const double base = spearman(t, p);
    auto apply = [](std::vector<double> v, auto f) {
        for (auto& x : v) x = f(x);
        return v;
    };
    EXPECT_NEAR(spearman(apply(t, [](double x) { return std::exp(x); }), p), base, 1e-12);
    EXPECT_NEAR(spearman(t, apply(p, [](double x) { return 5.0 * x + 2.0; })), base, 1e-12);
    EXPECT_NEAR(spearman(apply(t, [](double x) { return std::log(x); }),
                         apply(p, [](double x) { return x * x; })),
                base, 1e-12);
}

TEST(Spearman, RejectsTooFewSamples) {
    std::vector<double> one{1.0};
    EXPECT_THROW(spearman(one, one), DomainError);
}

TEST(Metrics, MatchBruteForceOnRandomVectors) {
    Rng rng(12345);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto n = static_cast<std::size_t>(rng.uniform_int(2, 50));
        std::vector<double> t(n), p(n);
        for (std::size_t i = 0; i < n; ++i) {
            t[i] = rng.uniform(0.05, 10.0);
            p[i] = rng.uniform(0.05, 10.0);
        }
        EXPECT_NEAR(mape(t, p), brute_mape(t, p), 1e-12);
        EXPECT_NEAR(mape_thresholded(t, p, 0.3).value,
                    brute_mape_thresholded(t, p, 0.3), 1e-12);
        EXPECT_NEAR(spearman(t, p), brute_spearman(t, p), 1e-12);
    }
}

TEST(Speedup, RatioAndDomain) {
    EXPECT_DOUBLE_EQ(speedup(1.7, 1.0), 1.7);
    EXPECT_DOUBLE_EQ(speedup(2.0, 2.0), 1.0);
    EXPECT_DOUBLE_EQ(speedup(2.0, 4.0), 0.5);
    EXPECT_THROW(speedup(0.0, 1.0), DomainError);
    EXPECT_THROW(speedup(1.0, -2.0), DomainError);
}

TEST(Aggregate, MeansPerGroupPlusOverall) {
    EvalReport a;
    a.kernel = "mm";
    a.variant = "dense_single";
    a.model_family = "nnc";
    a.mape_full = 10.0;
    a.mape_thresholded = 8.0;
    a.rho = 0.9;
    EvalReport b = a;
    b.variant = "sparse_single";
    b.mape_full = 20.0;
    b.mape_thresholded = 12.0;
    b.rho = 0.7;
    EvalReport c = a;
    c.kernel = "mv";
    c.mape_full = 30.0;

    const auto single = aggregate({a}, GroupBy::Kernel);
    ASSERT_EQ(single.size(), 2u);
    EXPECT_DOUBLE_EQ(single[0].mape_full, 10.0);

    const auto rows = aggregate({a, b, c}, GroupBy::Kernel);
    ASSERT_EQ(rows.size(), 3u);  // mm, mv, overall
    EXPECT_EQ(rows[0].group, "mm");
    EXPECT_DOUBLE_EQ(rows[0].mape_full, 15.0);
    EXPECT_EQ(rows[1].group, "mv");
    EXPECT_DOUBLE_EQ(rows[1].mape_full, 30.0);
    EXPECT_EQ(rows[2].group, "overall");
    EXPECT_DOUBLE_EQ(rows[2].mape_full, 20.0);

    EXPECT_THROW(aggregate({}, GroupBy::Kernel), DomainError);
}

TEST(Reports, CsvAndTableEmission) {
    EvalReport r;
    r.kernel = "mm";
    r.variant = "dense_threaded";
    r.model_family = "nnc";
    r.mape_full = 12.5;
    r.mape_thresholded = 7.25;
    r.rho = 0.95;
    r.n_total = 250;
    r.n_kept = 175;
    std::ostringstream csv;
    write_reports_csv(csv, {r});
    EXPECT_NE(csv.str().find("kernel,variant,model_family,"), std::string::npos);
    EXPECT_NE(csv.str().find("mm,dense_threaded,nnc,12.5,7.25"), std::string::npos);
    std::ostringstream table;
    print_reports(table, {r});
    EXPECT_NE(table.str().find("dense_threaded"), std::string::npos);
}
