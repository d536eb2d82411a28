#include "leadlag/error.hpp"
#include "leadlag/xcorr.hpp"
#include "oracles/ccf_formula.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace leadlag;
using namespace leadlag::xcorr;

TEST(Ccf, SelfAndNegatedCorrelation) {
    const auto x = testing_support::white_noise(50, 1);
    EXPECT_NEAR(ccf_at_delay(x, x, 0), 1.0, 1e-14);
    std::vector<double> neg(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) neg[i] = -x[i];
    EXPECT_NEAR(ccf_at_delay(x, neg, 0), -1.0, 1e-14);
}

TEST(Ccf, ImpulseMatchesLiteralFormula) {
    const std::vector<double> x{0, 0, 1, 0, 0, 0};
    const std::vector<double> y{0, 0, 0, 0, 1, 0}; // x two days later
    int best = 0;
    double best_v = -2;
    for (int d = -3; d <= 3; ++d) {
        const double v = ccf_at_delay(x, y, d);
        EXPECT_NEAR(v, oracle::ccf_delay(x, y, d), 1e-15);
        EXPECT_NEAR(ccf_at_lead(x, y, -d), v, 0.0);
        if (v > best_v) {
            best_v = v;
            best = -d;
        }
    }
    EXPECT_EQ(best, 2);
}

TEST(Ccf, ProfileMatchesLiteralFormula) {
    std::mt19937_64 rng(12);
    for (int rep = 0; rep < 20; ++rep) {
        const auto x = testing_support::ar1(90, 0.8, rng());
        const auto y = testing_support::ar1(90, 0.8, rng());
        const auto p = ccf_profile(x, y, 30);
        for (int lead = -30; lead <= 30; ++lead) EXPECT_NEAR(p.at_lead(lead), oracle::ccf_delay(x, y, -lead), 1e-13);
    }
}

TEST(Ccf, IdenticalSeriesPeakAtZero) {
    const auto x = testing_support::wave(120, 50, 15);
    const auto p = ccf_profile(x, x, 30);
    EXPECT_NEAR(p.at_lead(0), 1.0, 1e-14);
    const auto best = optimal_lead(p);
    ASSERT_TRUE(best);
    EXPECT_EQ(best->lead, 0);
    EXPECT_NEAR(best->value, 1.0, 1e-14);
}

TEST(Ccf, RoleReversalMirrorsProfile) {
    std::vector<double> x(100, 0.0), y(100, 0.0);
    const auto core_x = testing_support::white_noise(40, 3), core_y = testing_support::white_noise(40, 4);
    std::copy(core_x.begin(), core_x.end(), x.begin() + 30);
    std::copy(core_y.begin(), core_y.end(), y.begin() + 30);
    const auto pxy = ccf_profile(x, y, 30);
    const auto pyx = ccf_profile(y, x, 30);
    for (int lead = -30; lead <= 30; ++lead) {
        EXPECT_NEAR(pxy.at_lead(lead), pyx.at_lead(-lead), 1e-12);
        EXPECT_NEAR(pyx.at_lead(lead), oracle::ccf_delay(y, x, -lead), 1e-12);
    }
}

TEST(Ccf, AutocorrelationSymmetric) {
    std::vector<double> x(100, 0.0);
    const auto core = testing_support::white_noise(40, 5);
    std::copy(core.begin(), core.end(), x.begin() + 30);
    const auto p = ccf_profile(x, x, 30);
    for (int lead = 1; lead <= 30; ++lead) EXPECT_NEAR(p.at_lead(lead), p.at_lead(-lead), 1e-9);
}

TEST(Ccf, BoundedAndAffineCovariant) {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> coef(-4, 4);
    for (int rep = 0; rep < 50; ++rep) {
        const auto x = testing_support::ar1(70, 0.5, rng());
        const auto y = testing_support::ar1(70, 0.5, rng());
        double a = coef(rng), c = coef(rng);
        if (std::fabs(a) < 0.1) a = 1.1;
        if (std::fabs(c) < 0.1) c = -0.9;
        std::vector<double> ax(x.size()), cy(y.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            ax[i] = a * x[i] + 3.0;
            cy[i] = c * y[i] - 7.0;
        }
        const auto p = ccf_profile(x, y, 30);
        const auto q = ccf_profile(ax, cy, 30);
        const double sign = (a * c > 0) ? 1.0 : -1.0;
        for (int lead = -30; lead <= 30; ++lead) {
            EXPECT_LE(std::fabs(p.at_lead(lead)), 1.0 + 1e-9);
            EXPECT_NEAR(q.at_lead(lead), sign * p.at_lead(lead), 1e-10);
        }
    }
}

TEST(Ccf, WhiteNoiseBound) {
    std::vector<double> peaks, at14;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto x = testing_support::white_noise(300, 1000 + seed);
        const auto y = testing_support::white_noise(300, 5000 + seed);
        const auto p = ccf_profile(x, y, 30);
        double m = 0;
        for (double v : p.values) m = std::max(m, std::fabs(v));
        peaks.push_back(m);
        at14.push_back(std::fabs(ccf_at_horizon(x, y, 14)));
    }
    std::sort(peaks.begin(), peaks.end());
    std::sort(at14.begin(), at14.end());
    EXPECT_LT(peaks[98], 0.25);
    EXPECT_LT(at14[98], 0.25);
}

TEST(Ccf, HorizonOnShiftedWave) {
    const auto y = testing_support::wave(200, 100, 20);
    const auto x = testing_support::wave(200, 100, 20, 14);
    EXPECT_NEAR(ccf_at_horizon(x, y, 14), 1.0, 0.02);
    EXPECT_NEAR(ccf_at_horizon(y, y, 0), 1.0, 1e-14);
}

TEST(Ccf, NoiselessLeadRecoveredExactly) {
    for (int lead : {5, 10, 20}) {
        const auto y = testing_support::wave(150, 75, 18);
        const auto x = testing_support::wave(150, 75, 18, lead);
        const auto best = optimal_lead(ccf_profile(x, y, 30));
        ASSERT_TRUE(best);
        EXPECT_EQ(best->lead, lead);
    }
}

TEST(Ccf, Errors) {
    const std::vector<double> c(40, 2.0);
    const auto x = testing_support::white_noise(40, 1);
    try {
        (void)ccf_profile(c, x, 10);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::degenerate);
        EXPECT_STREQ(e.what(), "zero variance");
    }
    EXPECT_THROW((void)ccf_at_lead(x, x, 38), Error);
    EXPECT_NO_THROW((void)ccf_at_lead(x, x, 37));
}

TEST(OptimalLead, Rules) {
    CcfProfile p;
    p.window = 15;
    p.values.assign(31, 0.1);
    p.values[static_cast<std::size_t>(12 + 15)] = 0.9;
    auto best = optimal_lead(p);
    ASSERT_TRUE(best);
    EXPECT_EQ(best->lead, 12);
    EXPECT_EQ(best->value, 0.9);

    p.values.assign(31, -0.2);
    EXPECT_FALSE(optimal_lead(p));

    p.values.assign(31, 0.0);
    p.values[static_cast<std::size_t>(-3 + 15)] = 0.7;
    p.values[static_cast<std::size_t>(3 + 15)] = 0.7;
    EXPECT_EQ(optimal_lead(p)->lead, 3);

    p.values[static_cast<std::size_t>(-1 + 15)] = 0.7;
    EXPECT_EQ(optimal_lead(p)->lead, -1);
}
