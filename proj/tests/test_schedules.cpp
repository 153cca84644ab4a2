// Copyright 2026 The SPAUC Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "spauc/schedules.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <tuple>
#include <vector>

using namespace spauc;

TEST(Schedule, Values) {
    EXPECT_DOUBLE_EQ(schedule::poly(0.1, 1.0).step_size(10), 0.01);
    EXPECT_DOUBLE_EQ(schedule::fastrate(1.0, 1.0, 0.0).step_size(1), 2.0 / 3.0);
    EXPECT_DOUBLE_EQ(schedule::logdamped(1.0, 3.0).step_size(1), 1.0);
    EXPECT_DOUBLE_EQ(schedule::practical(0.5).step_size(2), 1.0);
    EXPECT_DOUBLE_EQ(schedule::logdamped(2.0, 3.0).step_size(5), 2.0 / std::sqrt(5.0 * std::pow(std::log(std::exp(1.0) * 5.0), 3.0)));
}

TEST(Schedule, RejectsBadParameters) {
    EXPECT_THROW((void) schedule::poly(0.1, 0.5), invalid_parameter);
    EXPECT_THROW((void) schedule::poly(0.1, 1.1), invalid_parameter);
    EXPECT_THROW((void) schedule::poly(0.0, 0.7), invalid_parameter);
    EXPECT_THROW((void) schedule::logdamped(1.0, 2.0), invalid_parameter);
    EXPECT_THROW((void) schedule::fastrate(0.0, 1.0, 0.0), invalid_parameter);
    EXPECT_THROW((void) schedule::fastrate(1.0, -1.0, 0.0), invalid_parameter);
    EXPECT_THROW((void) schedule::fastrate(1.0, 0.0, -1.0), invalid_parameter);
    EXPECT_THROW((void) schedule::practical(0.0), invalid_parameter);
    EXPECT_THROW((void) schedule::practical(1.0).step_size(0), invalid_parameter);
}

namespace {

std::vector<schedule> samples() {
    return { schedule::poly(0.5, 0.51), schedule::poly(2.0, 1.0),          schedule::logdamped(1.0, 2.5), schedule::logdamped(0.1, 4.0),
             schedule::fastrate(0.4, 0.4, 10.0), schedule::fastrate(2.0, 0.0, 0.0), schedule::practical(1e-7), schedule::practical(100.0),
             schedule::practical(1e-2).clamp_for_theory(0.0, 3.0) };
}

std::vector<std::int64_t> sample_points() {
    std::vector<std::int64_t> ts;
    for (std::int64_t t = 1; t <= 1000; ++t) {
        ts.push_back(t);
    }
    for (std::int64_t t = 1000; t <= 1000000; t += 997) {
        ts.push_back(t);
    }
    return ts;
}

}  // namespace

TEST(Schedule, MonotoneAndPositive) {
    for (const schedule &s : samples()) {
        double prev = s.step_size(1);
        for (const std::int64_t t : sample_points()) {
            const double now = s.step_size(t);
            EXPECT_GT(now, 0.0) << s.name();
            EXPECT_LE(now, prev) << s.name() << " t=" << t;
            EXPECT_LE(s.step_size(t + 1), now) << s.name() << " t=" << t;
            prev = now;
        }
    }
}

TEST(Schedule, FastRateProofBound) {
    for (const auto &[sigma_phi, sigma_f, t1] : std::vector<std::tuple<double, double, double>>{ { 0.4, 0.4, 10 }, { 1.0, 0.0, 0 }, { 3.0, 7.0, 100 } }) {
        const schedule s = schedule::fastrate(sigma_phi, sigma_f, t1);
        for (const std::int64_t t : sample_points()) {
            EXPECT_LE(s.step_size(t), 4.0 / ((static_cast<double>(t) + t1 + 1.0) * sigma_phi) * (1 + 1e-15));
        }
    }
}

TEST(Schedule, ClampForTheory) {
    EXPECT_DOUBLE_EQ(schedule::theory_step_bound(0.0, 1.0), 1.0 / 32.0);
    const schedule clamped = schedule::poly(1.0, 1.0).clamp_for_theory(0.0, 1.0);
    EXPECT_EQ(clamped, schedule::poly(1.0 / 32.0, 1.0));
    const schedule small = schedule::poly(1e-3, 0.7);
    EXPECT_EQ(small.clamp_for_theory(0.0, 1.0), small);
    EXPECT_EQ(clamped.clamp_for_theory(0.0, 1.0), clamped);

    // A1 dominates 16 kappa^2 when larger
    EXPECT_DOUBLE_EQ(schedule::theory_step_bound(64.0, 1.0), 1.0 / 128.0);

    const schedule practical = schedule::practical(1e-3).clamp_for_theory(0.0, 2.0);
    EXPECT_DOUBLE_EQ(practical.step_size(1), 1.0 / 128.0);
    EXPECT_DOUBLE_EQ(practical.step_size(10'000'000), 2.0 / (1e-3 * 1e7 + 1.0));
    EXPECT_THROW((void) schedule::practical(1.0).clamp_for_theory(0.0, 0.5), invalid_parameter);
}

TEST(Schedule, DefaultT1) {
    // 32 * 16 / 0.5 * log(2 * 1000 / 0.01)
    const double expected = std::ceil(32.0 * 16.0 / 0.5 * std::log(2.0 * 1000.0 / 0.01));
    EXPECT_DOUBLE_EQ(schedule::default_t1(0.0, 1.0, 0.5, 1000), expected);
    EXPECT_THROW((void) schedule::default_t1(0.0, 1.0, 0.0, 1000), invalid_parameter);
}
