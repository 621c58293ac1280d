#include <gtest/gtest.h>

#include "hda/disk_model.hpp"

using namespace hda;

TEST(ServiceTimes, Ibm18es) {
    const auto st = service_times(ibm_18es());
    // 7.16 + 8.33/2 + 0.16
    EXPECT_NEAR(st.x_sr_ms, 11.485, 1e-12);
    EXPECT_NEAR(st.x_sw_ms, 11.625, 1e-12);
    EXPECT_NEAR(st.x_rmw_ms, 19.815, 1e-12);
    EXPECT_NEAR(st.x_sr_ms, 11.49, 0.01);
    EXPECT_NEAR(st.x_rmw_ms, 19.82, 0.01);
}

TEST(ServiceTimes, TransferOnly) {
    DiskSpec d;
    d.seek_ms = d.rotation_ms = d.settle_ms = 0.0;
    d.transfer_ms = 1.0;
    const auto st = service_times(d);
    EXPECT_DOUBLE_EQ(st.x_sr_ms, 1.0);
    EXPECT_DOUBLE_EQ(st.x_sw_ms, 1.0);
    EXPECT_DOUBLE_EQ(st.x_rmw_ms, 1.0);
}

TEST(ServiceTimes, Ordering) {
    for (double settle : {0.01, 0.5, 3.0})
        for (double rot : {4.0, 8.33, 11.0}) {
            DiskSpec d;
            d.settle_ms = settle;
            d.rotation_ms = rot;
            const auto st = service_times(d);
            EXPECT_LT(st.x_sr_ms, st.x_sw_ms);
            EXPECT_LT(st.x_sw_ms, st.x_rmw_ms);
        }
}

TEST(MaxBandwidth, Values) {
    EXPECT_NEAR(max_bandwidth(ibm_18es()), 1000.0 / 11.485, 1e-9);
    EXPECT_NEAR(max_bandwidth(ibm_18es()), 87.0, 0.5);
    EXPECT_DOUBLE_EQ(max_bandwidth(ServiceTimes{10.0, 10.0, 10.0}), 100.0);
    EXPECT_DOUBLE_EQ(max_bandwidth(ServiceTimes{20.0, 20.0, 20.0}), 50.0);
}

TEST(CapacityBandwidthRatio, Values) {
    EXPECT_NEAR(capacity_bandwidth_ratio(ibm_18es()), 9.17 * 11.485 / 1000.0, 1e-12);
    EXPECT_NEAR(capacity_bandwidth_ratio(ibm_18es()), 0.105, 0.001);

    DiskSpec d;
    d.seek_ms = d.rotation_ms = d.settle_ms = 0.0;
    d.transfer_ms = 10.0;
    d.capacity_gb = 10.0;
    EXPECT_DOUBLE_EQ(capacity_bandwidth_ratio(d), 0.1);
    d.capacity_gb = 20.0;
    EXPECT_DOUBLE_EQ(capacity_bandwidth_ratio(d), 0.2);
}

TEST(DiskSpec, Validation) {
    DiskSpec d;
    d.capacity_gb = 0.0;
    EXPECT_THROW(service_times(d), invalid_input);
    d = DiskSpec{};
    d.transfer_ms = 0.0;
    EXPECT_THROW(service_times(d), invalid_input);
    d = DiskSpec{};
    d.count = 0;
    EXPECT_THROW(d.validate(), invalid_input);
    d = DiskSpec{};
    d.seek_ms = -1.0;
    EXPECT_THROW(d.validate(), invalid_input);
    EXPECT_THROW(disk_preset("nope"), invalid_input);
    EXPECT_EQ(disk_preset("ibm-18es"), ibm_18es());
}
