#include <gtest/gtest.h>

#include <algorithm>
#include <map>

#include "perfsage/errors.hpp"
#include "perfsage/rng.hpp"
#include "perfsage/selector.hpp"

using namespace perfsage;
using namespace perfsage::selector;
using kernels::ScheduleCandidate;
using kernels::ScheduleSpace;

TEST(ScheduleSpace, LatticeSizes) {
    // CPU lattice: 10 choices of s1 x sum over s2 of chained (s3, s4) counts.
    EXPECT_EQ(ScheduleSpace::cpu_default().size(), 2200u);
    // GPU-style lattice: 4 * 7 * 7 * 1; over the six blur sides that is 1176.
    EXPECT_EQ(ScheduleSpace::gpu_style().size(), 196u);
    EXPECT_EQ(6 * ScheduleSpace::gpu_style().size(), 1176u);
}

TEST(ScheduleSpace, ChainConstraints) {
    const auto space = ScheduleSpace::cpu_default();
    for (const auto& c : space.enumerate_all()) {
        EXPECT_TRUE(c.satisfies_chain());
        EXPECT_TRUE(space.contains(c));
    }
    EXPECT_FALSE(space.contains({8, 4, 8, 2}));   // s3 > s2
    EXPECT_FALSE(space.contains({8, 4, 4, 8}));   // s4 > s3
    EXPECT_FALSE(space.contains({8, 4, 3, 2}));   // not a power of two
    EXPECT_TRUE(ScheduleSpace::gpu_style().contains({8, 1, 64, 1}));
}

TEST(EnumerateCandidates, ChainForcedBySmallS2) {
    auto space = ScheduleSpace::cpu_default();
    space.s2_max = 2;
    for (const auto& c : enumerate_candidates(space, 10000, 1)) {
        EXPECT_EQ(c.s2, 2u);
        EXPECT_EQ(c.s3, 2u);
        EXPECT_EQ(c.s4, 2u);
    }
}

TEST(EnumerateCandidates, ExhaustiveIsLexicographic) {
    const auto all = enumerate_candidates(ScheduleSpace::cpu_default(), 1u << 20, 9);
    EXPECT_EQ(all.size(), 2200u);
    EXPECT_TRUE(std::is_sorted(all.begin(), all.end()));
    EXPECT_EQ(all.front(), (ScheduleCandidate{2, 2, 2, 2}));
    EXPECT_EQ(all.back(), (ScheduleCandidate{1024, 1024, 1024, 1024}));
}

TEST(EnumerateCandidates, SampleIsSeededAndWithoutReplacement) {
    const auto a = enumerate_candidates(ScheduleSpace::cpu_default(), 100, 4);
    const auto b = enumerate_candidates(ScheduleSpace::cpu_default(), 100, 4);
    const auto c = enumerate_candidates(ScheduleSpace::cpu_default(), 100, 5);
    EXPECT_EQ(a.size(), 100u);
    EXPECT_TRUE(std::equal(a.begin(), a.end(), b.begin()));
    EXPECT_FALSE(std::equal(a.begin(), a.end(), c.begin()));
    auto sorted = a;
    std::sort(sorted.begin(), sorted.end());
    EXPECT_EQ(std::adjacent_find(sorted.begin(), sorted.end()), sorted.end());
    EXPECT_THROW(enumerate_candidates(ScheduleSpace::cpu_default(), 0, 1), ParamError);
}

TEST(Select, SingleCandidateAndTieBreaking) {
    const ScheduleCandidate only{4, 8, 4, 2};
    EXPECT_EQ(select([](const ScheduleCandidate&) { return 1.0; }, {only}), only);

    const ScheduleCandidate small{2, 4, 4, 2}, big{8, 8, 8, 8};
    const auto tied = select([](const ScheduleCandidate&) { return 0.5; }, {big, small});
    EXPECT_EQ(tied, small);  // lexicographically smaller wins ties

    EXPECT_THROW(select([](const ScheduleCandidate&) { return 0.0; }, {}), ParamError);
}

TEST(Select, MemorizingPredictorMatchesBruteForceArgmin) {
    Rng rng(31);
    const auto lattice = ScheduleSpace::cpu_default().enumerate_all();
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t count = 1 + rng.bounded(50);
        auto candidates = enumerate_candidates(ScheduleSpace::cpu_default(), count,
                                               derive_seed(7, trial));
        std::map<ScheduleCandidate, double> measured;
        for (const auto& c : candidates) measured[c] = rng.uniform(1e-4, 1e-1);

        const auto chosen = select(
            [&](const ScheduleCandidate& c) { return measured.at(c); }, candidates);

        const auto best = *std::min_element(
            candidates.begin(), candidates.end(),
            [&](const auto& a, const auto& b) { return measured.at(a) < measured.at(b); });
        EXPECT_EQ(chosen, best);
        EXPECT_TRUE(ScheduleSpace::cpu_default().contains(chosen));
    }
}

TEST(EvaluateSelection, FillsRegretAndSpeedups) {
    const ScheduleCandidate best{2, 2, 2, 2}, mid{4, 4, 4, 4}, worst{8, 8, 8, 8};
    const ScheduleCandidate def{8, 256, 128, 8};
    MeasuredCandidates measured{{best, 1.0}, {mid, 2.0}, {worst, 5.0}};

    auto rep = evaluate_selection(best, measured, def, 1.7, 0.9);
    EXPECT_DOUBLE_EQ(rep.regret, 1.0);
    EXPECT_DOUBLE_EQ(rep.speedup_vs_default, 1.7);
    EXPECT_DOUBLE_EQ(rep.speedup_vs_random_mean, (8.0 / 3.0) / 1.0);
    EXPECT_DOUBLE_EQ(rep.predicted_s, 0.9);
    EXPECT_EQ(rep.true_best, best);

    auto rep2 = evaluate_selection(mid, measured, best);
    EXPECT_DOUBLE_EQ(rep2.regret, 2.0);
    EXPECT_DOUBLE_EQ(rep2.speedup_vs_default, 0.5);
    EXPECT_GE(rep2.regret, 1.0);

    EXPECT_THROW(evaluate_selection(def, measured, best), ParamError);  // unmeasured chosen
    EXPECT_THROW(evaluate_selection(best, measured, def), ParamError);  // unmeasured default
    EXPECT_THROW(evaluate_selection(best, {}, def, 1.0), ParamError);
}

TEST(SelectionReport, JsonAndSummaryCarryTheNumbers) {
    const ScheduleCandidate a{2, 4, 2, 2}, b{4, 4, 4, 4};
    MeasuredCandidates measured{{a, 0.5}, {b, 1.0}};
    const auto rep = evaluate_selection(a, measured, b, std::nullopt, 0.4);
    const auto json = rep.to_json();
    EXPECT_NE(json.find("\"regret\""), std::string::npos);
    EXPECT_NE(json.find("\"speedup_vs_default\""), std::string::npos);
    EXPECT_NE(rep.summary().find("{2,4,2,2}"), std::string::npos);
}
