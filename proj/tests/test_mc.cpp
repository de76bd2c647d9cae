/* Copyright 2026 The cropcraft Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "cropcraft/mc.hpp"
#include "cropcraft/optimize.hpp"

using namespace cropcraft;

TEST_SUITE_BEGIN("mc");

TEST_CASE("identical seeds give identical counts for any thread count") {
    const LayoutF layout = make_optimal_layout_f(Direction::LeftRight, 2.0, 1.0);
    const CropSampler sampler = make_sampler(layout, 31337);
    const EventCounts one = estimate_events(layout, sampler, 50'000, 0.05, 1);
    const EventCounts three = estimate_events(layout, sampler, 50'000, 0.05, 3);
    const EventCounts eight = estimate_events(layout, sampler, 50'000, 0.05, 8);
    CHECK(one == three);
    CHECK(one == eight);

    // A different seed gives a different stream.
    const CropSampler other = make_sampler(layout, 31338);
    CHECK(estimate_events(layout, other, 50'000, 0.05, 1) != one);
}

TEST_CASE("count invariants") {
    const LayoutF layout = make_layout_f(Direction::LeftRight, 2.0, 1.0, 0.5, 2.25, 0.1, 0.0);
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        const CropSampler sampler = make_sampler(layout, seed);
        const EventCounts ev = estimate_events(layout, sampler, 20'000, 0.05, 2);
        CHECK(ev.n_samples == 20'000);
        for (std::uint64_t c : {ev.trigger_retention, ev.reference_matching, ev.view_disjoint,
                                ev.view_disjoint_iou, ev.joint, ev.sweet_spot,
                                ev.information_leak, ev.missing_information})
            CHECK(c <= ev.n_samples);
        CHECK(ev.joint <= ev.trigger_retention);
        CHECK(ev.joint <= ev.reference_matching);
        CHECK(ev.joint <= ev.view_disjoint);
        CHECK(ev.view_disjoint <= ev.view_disjoint_iou);
        // A retained view inside the shadow paired with a reference-matching
        // view is exactly the sweet spot, so the counts must agree.
        CHECK(ev.joint <= ev.sweet_spot);
    }
}

TEST_CASE("invalid layouts are rejected before sampling") {
    LayoutF layout = make_optimal_layout_f(Direction::LeftRight, 2.0, 1.0);
    layout.shadow = layout.reference;  // overlapping
    const CropSampler sampler = make_sampler(layout, 5);
    CHECK_THROWS_AS(estimate_events(layout, sampler, 100, 0.05, 1), std::invalid_argument);

    LayoutF bad = make_optimal_layout_f(Direction::LeftRight, 2.0, 1.0);
    bad.trigger = bad.shadow;  // trigger must be strictly smaller
    CHECK_THROWS_AS(estimate_events(bad, make_sampler(bad, 5), 100, 0.05, 1),
                    std::invalid_argument);

    const LayoutF good = make_optimal_layout_f(Direction::LeftRight, 2.0, 1.0);
    CHECK_THROWS_AS(estimate_events(good, make_sampler(good, 5), 0, 0.05, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(estimate_joint(good, make_sampler(good, 5), 9'999, 1),
                    std::invalid_argument);
}

TEST_CASE("geometrically impossible and certain events get exact counts") {
    // Full-height crops on the optimal canvas: the views always overlap
    // vertically in full, and horizontal separation >= s cannot happen inside
    // a placement range of width s. Disjointness is impossible; its
    // complement is certain.
    const LayoutF layout = make_optimal_layout_f(Direction::LeftRight, 2.0, 1.0);
    const CropSampler sampler = make_sampler(layout, 7);
    const EventCounts ev = estimate_events_fixed_side(layout, 2.0, sampler, 10'000, 0.0);
    CHECK(ev.view_disjoint == 0);
    CHECK(ev.trigger_retention == 0);  // side-2 crop inside the shadow needs measure-zero x
    CHECK(ev.joint == 0);
}

TEST_CASE("estimates converge as n doubles") {
    const LayoutF layout = make_optimal_layout_f(Direction::LeftRight, 2.0, 1.0);
    const CropSampler sampler = make_sampler(layout, 1234);
    auto joint_frac = [&](std::uint64_t n) {
        const EventCounts ev = estimate_events(layout, sampler, n, 0.05, 2);
        return std::make_pair(static_cast<double>(ev.joint) / n,
                              binomial_half_width(ev.joint, n));
    };
    std::uint64_t n = 25'000;
    auto [prev, prev_hw] = joint_frac(n);
    for (int step = 0; step < 3; ++step) {
        n *= 2;
        auto [cur, cur_hw] = joint_frac(n);
        // Guarded at 4 sigma: half-widths are 1.96 sigma.
        CHECK(std::abs(cur - prev) <= (4.0 / 1.96) * (prev_hw + cur_hw));
        prev = cur;
        prev_hw = cur_hw;
    }
}

TEST_CASE("up-down estimates match left-right within noise") {
    const SymmetryReport report = verify_symmetry(2.0, 1.0, 150'000, 99, 2);
    CHECK(report.pass);
}

TEST_CASE("joint estimate on the optimal layout") {
    const LayoutF layout = make_optimal_layout_f(Direction::LeftRight, 2.0, 1.0);
    const JointEstimate opt = estimate_joint(layout, make_sampler(layout, 42), 1'000'000, 2);
    CHECK(opt.half_width < 1e-3);
    CHECK(opt.p_hat > 0.0);

    // Wide gap: clearly worse, beyond CI overlap.
    const LayoutF gapped = make_layout_f(Direction::LeftRight, 2.0, 1.0, 2.0, 2.0);
    const JointEstimate far = estimate_joint(gapped, make_sampler(gapped, 43), 200'000, 2);
    CHECK(opt.p_hat - opt.half_width > far.p_hat + far.half_width);

    // Corner trigger: worse than centered, beyond CI overlap.
    const LayoutF corner = make_layout_f(Direction::LeftRight, 2.0, 1.0, 0.0, 2.0, 0.5, 0.5);
    const JointEstimate crn = estimate_joint(corner, make_sampler(corner, 44), 200'000, 2);
    CHECK(opt.p_hat - opt.half_width > crn.p_hat + crn.half_width);
}

TEST_CASE("independent-side mode is deterministic and distinct") {
    const LayoutF layout = make_optimal_layout_f(Direction::LeftRight, 2.0, 1.0);
    CropSampler shared = make_sampler(layout, 7);
    CropSampler indep = shared;
    indep.shared_side = false;
    const EventCounts a = estimate_events(layout, indep, 30'000, 0.05, 1);
    const EventCounts b = estimate_events(layout, indep, 30'000, 0.05, 4);
    CHECK(a == b);
    CHECK(a != estimate_events(layout, shared, 30'000, 0.05, 1));
}

TEST_CASE("resized-crop mode runs deterministically") {
    const LayoutF layout = make_optimal_layout_f(Direction::LeftRight, 2.0, 1.0);
    CropSampler sampler = make_sampler(layout, 11);
    sampler.mode = CropMode::ResizedCrop;
    const EventCounts a = estimate_events(layout, sampler, 20'000, 0.05, 1);
    const EventCounts b = estimate_events(layout, sampler, 20'000, 0.05, 3);
    CHECK(a == b);
    CHECK(a.n_samples == 20'000);
    // Wide crops leak information much more often than the paper-square model.
    CHECK(a.information_leak > 0);
}

TEST_CASE("sampler validation") {
    const LayoutF layout = make_optimal_layout_f(Direction::LeftRight, 2.0, 1.0);
    CropSampler sampler = make_sampler(layout, 1);
    sampler.dist.max_side = 5.0;  // exceeds the canvas
    CHECK_THROWS_AS(estimate_events(layout, sampler, 100, 0.05, 1), std::invalid_argument);

    CropSampler mismatched = make_sampler(layout, 1);
    mismatched.canvas_w = 10.0;  // sampler canvas must match the layout
    CHECK_THROWS_AS(estimate_events(layout, mismatched, 100, 0.05, 1), std::invalid_argument);
}

TEST_CASE("event counts csv") {
    EventCounts ev;
    ev.n_samples = 10;
    ev.trigger_retention = 3;
    ev.joint = 1;
    CHECK(event_counts_csv_header() ==
          "n_samples,trigger_retention,reference_matching,view_disjoint,view_disjoint_iou,joint,"
          "sweet_spot,information_leak,missing_information");
    CHECK(to_csv_row(ev) == "10,3,0,0,0,1,0,0,0");
}

TEST_SUITE_END();
