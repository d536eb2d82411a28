#include "leadlag/dtw.hpp"
#include "leadlag/error.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

using namespace leadlag;
using namespace leadlag::dtw;

namespace {

AlignmentQuery make_query(const std::vector<double>& x, const std::vector<double>& y, int window = 35, bool open_begin = true,
                          bool open_end = true) {
    return AlignmentQuery{Sequence(x), Sequence(y), window, StepPattern::asymmetric_p2, open_begin, open_end};
}

using Path = std::vector<std::pair<std::size_t, std::size_t>>;

void expect_valid_path(const Alignment& a, int window) {
    ASSERT_FALSE(a.path.empty());
    std::vector<bool> seen(a.query_length, false);
    for (std::size_t k = 0; k < a.path.size(); ++k) {
        const auto [i, j] = a.path[k];
        seen[i] = true;
        EXPECT_LE(std::labs(static_cast<long>(j) - static_cast<long>(i)), window);
        EXPECT_LT(j, a.reference_length);
        if (k > 0) {
            EXPECT_GE(i, a.path[k - 1].first);
            EXPECT_GE(j, a.path[k - 1].second);
            EXPECT_NE(a.path[k], a.path[k - 1]);
        }
    }
    EXPECT_TRUE(std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }));
}

std::string message_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.what();
    }
    return "<no error>";
}

} // namespace

TEST(LocalDistance, Examples) {
    EXPECT_EQ(local_distance(std::vector<double>{0}, std::vector<double>{0}), 0.0);
    EXPECT_EQ(local_distance(std::vector<double>{3}, std::vector<double>{7}), 4.0);
    EXPECT_EQ(local_distance(std::vector<double>{1, 2}, std::vector<double>{4, 6}), 5.0);
    EXPECT_THROW((void)local_distance(std::vector<double>{1, 2}, std::vector<double>{4}), Error);
}

// Costs below are worked out by hand from the step table, independently of
// both the DP and the exhaustive search.
TEST(StepWeights, SlowQueryMoveWeighsTwoThirds) {
    // n = 4, m = 5, closed ends: exactly two paths, diag+(2,3) or (2,3)+diag.
    const std::vector<double> q{0, 0, 0, 0};
    {
        const auto a = dtw_align(make_query(q, {1, 3, 0, 0, 0}, 35, false, false));
        EXPECT_NEAR(a.distance, 1.0 + 2.0 / 3.0 * 3.0, 1e-15);
        EXPECT_EQ(a.path, (Path{{0, 0}, {1, 1}, {2, 2}, {2, 3}, {3, 4}}));
    }
    {
        const auto a = dtw_align(make_query(q, {1, 0, 0, 0, 3}, 35, false, false));
        EXPECT_NEAR(a.distance, 1.0 + 2.0 / 3.0 * 3.0, 1e-15);
        EXPECT_EQ(a.path, (Path{{0, 0}, {1, 1}, {2, 2}, {3, 3}, {3, 4}}));
    }
}

TEST(StepWeights, FastQueryMoveWeighsOne) {
    // n = 5, m = 4, closed ends: diag+(3,2) or (3,2)+diag.
    const auto a = dtw_align(make_query({0, 0, 0, 0, 0}, {0, 0, 5, 0}, 35, false, false));
    EXPECT_DOUBLE_EQ(a.distance, 5.0);
    EXPECT_EQ(a.path, (Path{{0, 0}, {1, 1}, {2, 2}, {3, 3}, {4, 3}}));
}

TEST(StepWeights, SlopeLimitMakesSteepEndpointInfeasible) {
    // Reaching (3, 5) from (0, 0) needs slope 5/3 > 3/2.
    EXPECT_EQ(message_of([] { (void)dtw_align(make_query({0, 0, 0, 0}, {0, 0, 0, 0, 0, 0}, 35, false, false)); }),
              "no admissible path");
    EXPECT_EQ(message_of([] { (void)brute_force_dtw(make_query({0, 0, 0, 0}, {0, 0, 0, 0, 0, 0}, 35, false, false)); }),
              "no admissible path");
}

TEST(DtwAlign, IdenticalSeries) {
    const auto x = testing_support::white_noise(80, 4);
    const auto a = dtw_align(make_query(x, x));
    EXPECT_EQ(a.distance, 0.0);
    EXPECT_EQ(normalized_distance(a), 0.0);
    for (double l : lead_times_from_path(a)) EXPECT_EQ(l, 0.0);
    expect_valid_path(a, 35);
}

TEST(DtwAlign, DelayedImpulse) {
    std::vector<double> x(6, 0.0), y(12, 0.0);
    x[1] = 1.0;
    y[7] = 1.0;
    const auto q = make_query(x, y);
    const auto a = dtw_align(q);
    EXPECT_EQ(a.distance, 0.0);
    EXPECT_EQ(a.distance, brute_force_dtw(q).distance);
    const auto leads = lead_times_from_path(a);
    for (std::size_t i = 1; i <= 2; ++i) EXPECT_EQ(leads[i], 6.0) << i;
    expect_valid_path(a, 35);
}

TEST(DtwAlign, RandomPairMatchesOracle) {
    const auto x = testing_support::white_noise(10, 901);
    const auto y = testing_support::white_noise(12, 902);
    const auto q = make_query(x, y);
    const auto a = dtw_align(q);
    const auto b = brute_force_dtw(q);
    EXPECT_EQ(a.distance, b.distance);
    EXPECT_EQ(normalized_distance(a), b.distance / 10.0);
}

TEST(DtwAlign, MatchesOracleAcrossSettings) {
    std::mt19937_64 rng(55);
    int checked = 0;
    for (int rep = 0; rep < 120; ++rep) {
        const std::size_t n = 4 + rng() % 9, m = 4 + rng() % 9, dims = rep % 2 ? 3 : 1;
        std::vector<double> xq(n * dims), yr(m * dims);
        std::normal_distribution<double> g;
        for (auto& v : xq) v = g(rng);
        for (auto& v : yr) v = g(rng);
        const int window = std::array{1, 3, 35}[rng() % 3];
        AlignmentQuery q{Sequence(n, dims, xq), Sequence(m, dims, yr), window, StepPattern::asymmetric_p2, rng() % 2 == 0,
                         rng() % 2 == 0};
        const auto dp = message_of([&] { (void)dtw_align(q); });
        const auto bf = message_of([&] { (void)brute_force_dtw(q); });
        ASSERT_EQ(dp, bf);
        if (dp != "<no error>") continue;
        const auto a = dtw_align(q);
        const auto b = brute_force_dtw(q);
        EXPECT_EQ(a.distance, b.distance);
        expect_valid_path(a, window);
        ++checked;
    }
    EXPECT_GT(checked, 60);
}

TEST(DtwAlign, BandOfOneForcesDiagonalAtLengthFive) {
    const auto x = testing_support::white_noise(5, 61);
    const auto y = testing_support::white_noise(5, 62);
    const auto q = make_query(x, y, 1, false, false);
    const auto a = dtw_align(q);
    double diag = std::fabs(x[0] - y[0]);
    for (std::size_t i = 1; i < 5; ++i) diag += std::fabs(x[i] - y[i]);
    EXPECT_EQ(a.path, (Path{{0, 0}, {1, 1}, {2, 2}, {3, 3}, {4, 4}}));
    EXPECT_EQ(a.distance, diag);
    EXPECT_EQ(brute_force_dtw(q).distance, diag);
}

TEST(DtwAlign, ColumnPermutationInvariance) {
    std::mt19937_64 rng(8);
    for (int rep = 0; rep < 10; ++rep) {
        std::vector<std::vector<double>> xc, yc;
        for (int c = 0; c < 4; ++c) {
            xc.push_back(testing_support::white_noise(40, rng()));
            yc.push_back(testing_support::white_noise(45, rng()));
        }
        const Sequence x = Sequence::from_columns(xc), y = Sequence::from_columns(yc);
        const std::vector<std::size_t> perm{2, 0, 3, 1};
        const auto a = dtw_align({x, y, 10});
        const auto b = dtw_align({x.permuted(perm), y.permuted(perm), 10});
        EXPECT_NEAR(a.distance, b.distance, 1e-12 * (1.0 + a.distance));
        EXPECT_GE(a.distance, 0.0);
    }
}

TEST(DtwAlign, ShiftedWaveRecovered) {
    for (int lead : {5, 10, 20}) {
        const auto y = testing_support::wave(160, 80, 20);
        const auto x = testing_support::wave(160, 80, 20, lead);
        const auto a = dtw_align(make_query(x, y));
        auto leads = lead_times_from_path(a);
        std::nth_element(leads.begin(), leads.begin() + 80, leads.end());
        EXPECT_NEAR(leads[80], lead, 2.0);
    }
}

TEST(DtwAlign, InputErrors) {
    EXPECT_EQ(message_of([] { (void)dtw_align(make_query({1, 2, NAN, 4}, {1, 2, 3, 4})); }), "NaN in dtw input");
    EXPECT_THROW((void)dtw_align(make_query({1, 2, 3}, {1, 2, 3, 4})), Error);
    EXPECT_THROW((void)dtw_align(make_query({1, 2, 3, 4}, {1, 2, 3, 4}, 0)), Error);
    EXPECT_THROW((void)dtw_align({Sequence(std::vector<double>{1, 2, 3, 4}), Sequence(4, 2, std::vector<double>(8, 0.0))}),
                 Error);
}

TEST(BruteForce, Examples) {
    const std::vector<double> x{1, 4, 2, 8, 5};
    EXPECT_EQ(brute_force_dtw(make_query(x, x)).distance, 0.0);
    const std::vector<double> big(13, 1.0);
    EXPECT_EQ(message_of([&] { (void)brute_force_dtw(make_query(big, big)); }), "oracle scale exceeded");
}

TEST(LeadTimes, Examples) {
    Alignment id{{{0, 0}, {1, 1}, {2, 2}}, 0.0, 3, 3};
    EXPECT_EQ(lead_times_from_path(id), (std::vector<double>{0, 0, 0}));

    Alignment shift{{{0, 6}, {1, 7}, {2, 8}}, 0.0, 3, 9};
    EXPECT_EQ(lead_times_from_path(shift), (std::vector<double>{6, 6, 6}));

    Alignment seg{{{0, 0}, {1, 1}, {2, 2}, {3, 5}, {3, 6}, {4, 7}}, 0.0, 5, 8};
    const auto l = lead_times_from_path(seg);
    EXPECT_EQ(l[3], 2.5); // median j = 5.5
    EXPECT_EQ(l[4], 3.0);
}

TEST(NormalizedDistance, DividesByQueryLength) {
    Alignment a;
    a.distance = 5.0;
    a.query_length = 10;
    EXPECT_EQ(normalized_distance(a), 0.5);
}
