#include <cmath>

#include <gtest/gtest.h>

#include "hda/analysis.hpp"

using namespace hda;

TEST(Mm1, Examples) {
    const double x = 11.485;
    EXPECT_NEAR(mm1_response_at(0.8, x), 5.0 * x, 1e-12);
    EXPECT_NEAR(mm1_response_at(0.2, x), 1.25 * x, 1e-12);
    EXPECT_DOUBLE_EQ(mm1_response(Mm1Input{0.0, x}), x);
    EXPECT_NEAR(mm1_response(Mm1Input{50.0, 10.0}), 20.0, 1e-12);
}

TEST(Mm1, Saturation) {
    EXPECT_THROW(mm1_response_at(1.0, 10.0), saturation_error);
    EXPECT_THROW(mm1_response(Mm1Input{100.0, 10.0}), saturation_error);
    EXPECT_THROW(mm1_response_at(-0.1, 10.0), invalid_input);
}

TEST(Mm1, StrictlyIncreasing) {
    double prev = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double r = mm1_response_at(i / 1000.0, 3.0);
        EXPECT_GT(r, prev);
        prev = r;
    }
}

TEST(CompareConfigs, SharedHelpsRaid1WhenRaid5IsLight) {
    const int N = 8, n = 2;
    const double x = 11.485;
    Rng rng(3);
    int checked = 0;
    for (int t = 0; t < 2000; ++t) {
        const double l1 = 100.0 * rng.uniform_open();
        const double l5 = 500.0 * rng.uniform_open();
        PartitionComparison c;
        try {
            c = compare_configs(l1, l5, N, n, x);
        } catch (const saturation_error&) {
            continue;
        }
        ++checked;
        if (l5 < (N / 2.0 - 1.0) * l1) EXPECT_LT(c.r_c2, c.r_c1_r1);
        else EXPECT_GE(c.r_c2, c.r_c1_r1);
    }
    EXPECT_GT(checked, 100);
}

TEST(CompareConfigs, PriorityExample) {
    const double x = 10.0;
    const double l1 = 0.8 * 2 / x * 1000.0;  // rho = 0.8 on the RAID1 pair
    const auto c = compare_configs(l1, 100.0, 8, 2, x);
    EXPECT_NEAR(c.rho_c1_r1, 0.8, 1e-12);
    EXPECT_NEAR(c.rho_c2_priority, 0.2, 1e-12);
    EXPECT_NEAR(c.r_c1_r1, 5.0 * x, 1e-9);
    EXPECT_NEAR(c.r_c2_priority, 1.25 * x, 1e-9);
}

TEST(CompareConfigs, Symmetric) {
    const auto c = compare_configs(30.0, 30.0, 12, 6, 11.485);
    EXPECT_DOUBLE_EQ(c.rho_c1_r1, c.rho_c2);
    EXPECT_DOUBLE_EQ(c.r_c1_r1, c.r_c2);
    EXPECT_DOUBLE_EQ(c.r_c1_r5, c.r_c2);
}

TEST(DegradedExample, Values) {
    const auto e = degraded_response_example(0.1);
    EXPECT_NEAR(e.normal, 10.0 / 7.0, 1e-12);
    EXPECT_NEAR(e.disk2, 1.0 / 0.6, 1e-12);
    EXPECT_NEAR(e.disk4, 2.0, 1e-12);
    const double weighted = 10.0 / 7.0 + 4.0 / 3.0 / 0.6 + 5.0 / 3.0 * 2.0 + 4.0 * 10.0 / 7.0;
    EXPECT_NEAR(e.degraded_mean, weighted / 8.0, 1e-12);
    EXPECT_NEAR(e.degraded_mean_per_disk, weighted / 7.0, 1e-12);
    EXPECT_NEAR(e.va_a, (10.0 / 7.0 + 1.0 / 0.6) / 2.0, 1e-12);
    EXPECT_NEAR(e.va_f, (2.0 + 10.0 / 7.0) / 2.0, 1e-12);
}

TEST(DegradedExample, IdleArray) {
    const auto e = degraded_response_example(0.0);
    EXPECT_DOUBLE_EQ(e.normal, 1.0);
    EXPECT_DOUBLE_EQ(e.degraded_mean, 1.0);
    EXPECT_THROW(degraded_response_example(0.2), saturation_error);
}

TEST(Reliability, Basics) {
    EXPECT_DOUBLE_EQ(reliability_c1(1.0), 1.0);
    EXPECT_DOUBLE_EQ(reliability_c2(1.0), 1.0);
    EXPECT_DOUBLE_EQ(reliability_raid1_pairs(0.9, 1), 0.99);
    EXPECT_NEAR(reliability_raid5(0.9, 3), 0.729 + 3 * 0.1 * 0.81, 1e-12);
    EXPECT_THROW(reliability_raid5(1.1, 3), invalid_input);
}

TEST(Reliability, C1AtLeastC2) {
    for (int i = 0; i <= 1000; ++i) {
        const double r = i / 1000.0;
        EXPECT_GE(reliability_c1(r), reliability_c2(r)) << r;
    }
}

TEST(Reliability, Coefficients) {
    const double eps = 1e-3;
    EXPECT_NEAR(1.0 - reliability_c1(1.0 - eps), 16.0 * eps * eps, 100.0 * eps * eps * eps);
    EXPECT_NEAR(1.0 - reliability_c2(1.0 - eps), 32.0 * eps * eps, 500.0 * eps * eps * eps);
    double prev1 = 1e9, prev2 = 1e9;
    for (double e : {1e-1, 1e-2, 1e-3, 1e-4}) {
        const double d1 = std::abs(unreliability_coefficient(reliability_c1, e) - 16.0);
        const double d2 = std::abs(unreliability_coefficient(reliability_c2, e) - 32.0);
        EXPECT_LT(d1, prev1);
        EXPECT_LT(d2, prev2);
        prev1 = d1;
        prev2 = d2;
    }
}

TEST(ChooseAlpha, Examples) {
    const std::vector<double> all{0.125, 0.25, 0.375, 0.5, 0.625, 0.75, 0.875, 1.0};
    const auto base = reference_declustering_base();
    EXPECT_DOUBLE_EQ(choose_alpha(ibm_18es(), base, all), 0.25);
    EXPECT_DOUBLE_EQ(choose_alpha(ibm_18es(), base, std::vector<double>{0.875}), 0.875);

    DiskSpec d = ibm_18es();
    d.capacity_gb = 0.057 * max_bandwidth(d);
    EXPECT_DOUBLE_EQ(choose_alpha(d, base, std::vector<double>{0.125, 1.0}), 1.0);
}
