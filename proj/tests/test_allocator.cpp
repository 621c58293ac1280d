#include <algorithm>
#include <bit>
#include <set>

#include <gtest/gtest.h>

#include "hda/allocator.hpp"

using namespace hda;

namespace {

VaDemand demand(int width, double bw, double cap_gb, std::uint64_t index = 1) {
    VaDemand d;
    d.va_index = index;
    d.width = width;
    d.bw_per_vd = bw;
    d.cap_per_vd_gb = cap_gb;
    return d;
}

std::vector<int> placed(const PlaceResult& r) {
    const auto* p = std::get_if<Placement>(&r);
    return p ? p->disks : std::vector<int>{};
}

bool failed(const PlaceResult& r) { return std::holds_alternative<AllocationFailure>(r); }

FailureReason reason(const PlaceResult& r) { return std::get<AllocationFailure>(r).reason; }

// Randomly loaded array; utilizations in [0, 0.9).
ArrayState random_state(Rng& rng, int n, int periods = 1) {
    ArrayState s = ArrayState::uniform(n, 10.0, periods);
    for (int i = 0; i < n; ++i) s.set_utilization(i, 0.9 * rng.uniform_open(), 0.9 * rng.uniform_open());
    return s;
}

}  // namespace

TEST(Objectives, Examples) {
    const std::vector<double> bx{0.3, 0.4}, bc{0.2, 0.1};
    EXPECT_DOUBLE_EQ(objective_f1(bx, bc, 1.0), 0.4);
    const std::vector<double> fx{0.2, 0.4}, fc{0.1, 0.1};
    EXPECT_NEAR(objective_f2(fx, fc, 1.0), 0.01, 1e-15);
    const std::vector<double> cx{0.1, 0.2}, cc{0.9, 0.3};
    EXPECT_DOUBLE_EQ(objective_f1(cx, cc, 0.0), 0.2);
    EXPECT_DOUBLE_EQ(objective_f1(cx, cc, 1.0), 0.9);
    EXPECT_DOUBLE_EQ(objective_f1(cx, cc, 0.5), 0.45);
}

TEST(RoundRobin, WrapsAfterCursor) {
    ArrayState s = ArrayState::uniform(4, 10.0);
    s.set_rr_cursor(1);
    const auto r = try_place(s, demand(3, 0.01, 0.1), Policy{PolicyKind::round_robin});
    EXPECT_EQ(placed(r), (std::vector<int>{2, 3, 0}));
    EXPECT_EQ(s.rr_cursor(), 0);
}

TEST(RoundRobin, InitialCursorStartsAtDiskZero) {
    ArrayState s = ArrayState::uniform(5, 10.0);
    EXPECT_EQ(placed(try_place(s, demand(2, 0.01, 0.1), Policy{PolicyKind::round_robin})), (std::vector<int>{0, 1}));
    EXPECT_EQ(placed(try_place(s, demand(2, 0.01, 0.1), Policy{PolicyKind::round_robin})), (std::vector<int>{2, 3}));
}

TEST(RoundRobin, CursorStaysOnFailure) {
    ArrayState s = ArrayState::uniform(4, 10.0);
    s.set_rr_cursor(1);
    s.set_utilization(3, 0.99, 0.0);
    const auto before = s.digest();
    const auto r = try_place(s, demand(3, 0.05, 0.1), Policy{PolicyKind::round_robin});
    ASSERT_TRUE(failed(r));
    EXPECT_EQ(reason(r), FailureReason::bandwidth);
    EXPECT_EQ(s.rr_cursor(), 1);
    EXPECT_EQ(s.digest(), before);
}

TEST(MinF1, PicksLessLoadedDisk) {
    ArrayState s = ArrayState::uniform(2, 10.0);
    s.set_utilization(0, 0.5, 0.0);
    s.set_utilization(1, 0.1, 0.0);
    // post-placement F1: disk 0 -> 0.55, disk 1 -> 0.5
    EXPECT_EQ(placed(select_disks(s, demand(1, 0.05, 0.001), Policy{PolicyKind::min_f1})), std::vector<int>{1});
}

TEST(FirstFit, SkipsFullDisk) {
    ArrayState s = ArrayState::uniform(3, 10.0);
    s.set_utilization(0, 0.98, 0.0);
    EXPECT_EQ(placed(select_disks(s, demand(1, 0.05, 0.1), Policy{PolicyKind::first_fit})), std::vector<int>{1});
}

TEST(BestWorstFit, Ordering) {
    ArrayState s = ArrayState::uniform(4, 10.0);
    s.set_utilization(0, 0.2, 0.0);
    s.set_utilization(1, 0.6, 0.0);
    s.set_utilization(2, 0.97, 0.0);  // infeasible
    s.set_utilization(3, 0.2, 0.9);
    EXPECT_EQ(placed(select_disks(s, demand(2, 0.05, 0.1), Policy{PolicyKind::best_fit})), (std::vector<int>{1, 0}));
    EXPECT_EQ(placed(select_disks(s, demand(2, 0.05, 0.1), Policy{PolicyKind::worst_fit})), (std::vector<int>{0, 3}));
    Policy combined{PolicyKind::best_fit};
    combined.best_fit_rule = BestFitRule::combined;
    EXPECT_EQ(placed(select_disks(s, demand(2, 0.05, 0.1), combined)), (std::vector<int>{3, 1}));
}

// With lowest-index ties the two agree once the demand covers the U^x spread,
// so that every candidate raises the peak.
TEST(WorstFit, MatchesMinF1WithoutCapacityWeight) {
    Rng rng(5);
    for (int t = 0; t < 500; ++t) {
        ArrayState s = ArrayState::uniform(6, 10.0);
        for (int i = 0; i < 6; ++i) s.set_utilization(i, 0.4 + 0.05 * rng.uniform_open(), 0.9 * rng.uniform_open());
        const auto d = demand(1, 0.05 + 0.05 * rng.uniform_open(), 0.01);
        Policy f1{PolicyKind::min_f1, 0.0};
        EXPECT_EQ(placed(select_disks(s, d, Policy{PolicyKind::worst_fit})), placed(select_disks(s, d, f1)));
    }
}

TEST(Random, DistinctDisksAndReplayable) {
    ArrayState a = ArrayState::uniform(12, 10.0);
    ArrayState b = ArrayState::uniform(12, 10.0);
    Rng ra(77), rb(77);
    for (int t = 0; t < 50; ++t) {
        const auto d = demand(1 + t % 12, 0.001, 0.001);
        const auto pa = placed(try_place(a, d, Policy{PolicyKind::random}, &ra));
        const auto pb = placed(try_place(b, d, Policy{PolicyKind::random}, &rb));
        EXPECT_EQ(pa, pb);
        EXPECT_EQ(std::set<int>(pa.begin(), pa.end()).size(), pa.size());
    }
    EXPECT_THROW(select_disks(a, demand(1, 0.0, 0.0), Policy{PolicyKind::random}), invalid_input);
}

TEST(Failures, Reasons) {
    ArrayState s = ArrayState::uniform(3, 1.0);
    EXPECT_EQ(reason(select_disks(s, demand(4, 0.01, 0.01), Policy{})), FailureReason::insufficient_distinct_disks);
    EXPECT_EQ(reason(select_disks(s, demand(2, 0.01, 1.5), Policy{PolicyKind::first_fit})),
              FailureReason::capacity);
    EXPECT_EQ(reason(select_disks(s, demand(2, 1.0, 0.01), Policy{PolicyKind::min_f2})), FailureReason::bandwidth);
}

TEST(Failures, ZeroCapacityDisk) {
    ArrayState s({0.0, 0.0}, {1.0, 1.0});
    EXPECT_TRUE(failed(select_disks(s, demand(1, 0.01, 0.0), Policy{})));
}

TEST(Feasibility, StrictInequalityAndReserve) {
    ArrayState s = ArrayState::uniform(1, 10.0);
    s.set_utilization(0, 0.5, 0.0);
    EXPECT_TRUE(failed(select_disks(s, demand(1, 0.5, 0.0), Policy{PolicyKind::first_fit})));
    EXPECT_FALSE(failed(select_disks(s, demand(1, 0.49, 0.0), Policy{PolicyKind::first_fit})));
    ArrayState r = ArrayState::uniform(1, 10.0, 1, 0.2);
    EXPECT_TRUE(failed(select_disks(r, demand(1, 0.85, 0.0), Policy{PolicyKind::first_fit})));
}

TEST(Feasibility, EveryPeriodChecked) {
    ArrayState s = ArrayState::uniform(2, 10.0, 2);
    VaDemand d = demand(1, 0.3, 0.0);
    d.period_scaling = {1.0, 0.5};
    // disk 0 is busy only in period 1
    VaDemand busy = demand(1, 0.9, 0.0);
    busy.period_scaling = {0.0, 1.0};
    s.commit(busy, {0});
    EXPECT_NEAR(s.u_bw(0, 0), 0.0, 1e-15);
    EXPECT_NEAR(s.u_bw(0, 1), 0.9, 1e-15);
    EXPECT_EQ(placed(select_disks(s, d, Policy{PolicyKind::first_fit})), std::vector<int>{1});
}

TEST(Heterogeneous, ScaledDemand) {
    ArrayState s({10.0, 20.0}, {2.0, 1.0});
    const auto d = demand(2, 0.1, 1.0);
    try_place(s, d, Policy{PolicyKind::first_fit});
    EXPECT_DOUBLE_EQ(s.u_bw(0), 0.2);
    EXPECT_DOUBLE_EQ(s.u_bw(1), 0.1);
    EXPECT_DOUBLE_EQ(s.u_cap(0), 0.1);
    EXPECT_DOUBLE_EQ(s.u_cap(1), 0.05);
}

// Random request sequences through every policy: constraints hold, failures
// leave the state untouched, and the placement log replays exactly.
TEST(Properties, PackingRollbackReplay) {
    Rng rng(2024);
    for (auto kind : kAllPolicies) {
        for (int trial = 0; trial < 20; ++trial) {
            const int n = 3 + static_cast<int>(rng.below(10));
            const int periods = 1 + static_cast<int>(rng.below(3));
            ArrayState s = ArrayState::uniform(n, 5.0, periods);
            Policy pol{kind, rng.uniform_open() * 2.0};
            Rng prng(trial);
            for (int i = 0; i < 200; ++i) {
                VaDemand d = demand(1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n))),
                                    0.3 * rng.uniform_open(), 2.0 * rng.uniform_open(), i + 1);
                d.period_scaling.clear();
                d.period_scaling.push_back(1.0);
                for (int p = 1; p < periods; ++p) d.period_scaling.push_back(rng.uniform_open());
                const auto before = s.digest();
                const auto r = try_place(s, d, pol, &prng);
                if (failed(r)) {
                    EXPECT_EQ(s.digest(), before);
                } else {
                    const auto disks = placed(r);
                    EXPECT_EQ(static_cast<int>(disks.size()), d.width);
                    EXPECT_EQ(std::set<int>(disks.begin(), disks.end()).size(), disks.size());
                }
            }
            for (int i = 0; i < n; ++i) {
                for (int p = 0; p < periods; ++p) EXPECT_LT(s.u_bw(i, p), 1.0);
                EXPECT_LT(s.u_cap(i), 1.0);
            }
            const ArrayState r = ArrayState::replay(s);
            EXPECT_TRUE(r.same_utilization(s)) << to_string(kind);
        }
    }
}

TEST(Properties, MinF1ScaleInvariant) {
    Rng rng(31);
    for (int t = 0; t < 300; ++t) {
        const int n = 2 + static_cast<int>(rng.below(8));
        ArrayState a = ArrayState::uniform(n, 10.0);
        ArrayState b = ArrayState::uniform(n, 10.0);
        const double k = 0.25 + rng.uniform_open();
        for (int i = 0; i < n; ++i) {
            const double x = 0.5 * rng.uniform_open(), c = 0.5 * rng.uniform_open();
            a.set_utilization(i, x, c);
            b.set_utilization(i, x * k, c * k);
        }
        const double dx = 0.05 * rng.uniform_open(), dc = 0.5 * rng.uniform_open();
        const Policy pol{PolicyKind::min_f1, 0.3 + rng.uniform_open()};
        EXPECT_EQ(placed(select_disks(a, demand(1, dx, dc), pol)), placed(select_disks(b, demand(1, dx * k, dc * k), pol)));
    }
}

// Exhaustive enumeration over disk subsets for small arrays.
TEST(Properties, ExhaustiveOracle) {
    Rng rng(99);
    for (int t = 0; t < 2000; ++t) {
        const int n = 1 + static_cast<int>(rng.below(5));
        const int w = 1 + static_cast<int>(rng.below(2));
        ArrayState s = random_state(rng, n);
        const auto d = demand(w, 0.4 * rng.uniform_open(), 4.0 * rng.uniform_open());
        const double beta = rng.uniform_open() * 2.0;

        bool any = false;
        double best = std::numeric_limits<double>::infinity();
        for (unsigned mask = 0; mask < (1u << n); ++mask) {
            if (std::popcount(mask) != w) continue;
            std::vector<double> bx(n), bc(n);
            bool ok = true;
            for (int i = 0; i < n; ++i) {
                bx[i] = s.u_bw(i);
                bc[i] = s.u_cap(i);
                if (mask & (1u << i)) {
                    ok = ok && s.fits(i, d);
                    bx[i] += s.bw_on(i, d, 0);
                    bc[i] += s.cap_on(i, d);
                }
            }
            if (!ok) continue;
            any = true;
            best = std::min(best, objective_f1(bx, bc, beta));
        }

        const auto r = select_disks(s, d, Policy{PolicyKind::min_f1, beta});
        ASSERT_EQ(!failed(r), any);
        if (!any) continue;
        ArrayState after = s;
        after.commit(d, placed(r));
        for (int i = 0; i < n; ++i) {
            EXPECT_LT(after.u_bw(i), 1.0);
            EXPECT_LT(after.u_cap(i), 1.0);
        }
        const double got = objective_f1(after, beta);
        if (w == 1) EXPECT_DOUBLE_EQ(got, best);
        else EXPECT_GE(got, best);
    }
}
