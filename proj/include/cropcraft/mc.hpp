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

#pragma once

#include <cstdint>
#include <string>

#include "cropcraft/geometry.hpp"

namespace cropcraft {

/// Crop-side distribution: side uniform on (min_side, max_side].
struct CropDistribution {
    double min_side = 0.0;  // exclusive (the trigger side e_l)
    double max_side = 0.0;  // inclusive (S)
};

enum class CropMode {
    PaperSquare,  // square side ~ U(e_l, S], top-left uniform over valid positions
    ResizedCrop,  // area fraction U[0.2, 1], aspect U[3/4, 4/3]; realism mode
};

/// Deterministic crop-pair sampler. Identical fields and seed reproduce the
/// exact sample stream on any platform and any thread count: sample i is
/// generated from Philox stream i.
struct CropSampler {
    CropDistribution dist;
    double canvas_w = 0.0;
    double canvas_h = 0.0;
    std::uint64_t seed = 0;
    CropMode mode = CropMode::PaperSquare;
    bool shared_side = true;  // both views of a pair use one crop side

    void validate() const;
};

/// Sampler over a layout's canvas with side range (e_l, min(canvas sides)].
CropSampler make_sampler(const LayoutF& layout, std::uint64_t seed);

struct EventCounts {
    std::uint64_t n_samples = 0;
    std::uint64_t trigger_retention = 0;   // trigger inside V1, V1 inside shadow
    std::uint64_t reference_matching = 0;  // V2 inside reference
    std::uint64_t view_disjoint = 0;       // intersection area exactly 0
    std::uint64_t view_disjoint_iou = 0;   // IOU(V1, V2) <= tau
    std::uint64_t joint = 0;               // all three (exact disjointness)
    std::uint64_t sweet_spot = 0;
    std::uint64_t information_leak = 0;
    std::uint64_t missing_information = 0;

    EventCounts& operator+=(const EventCounts& other);
    bool operator==(const EventCounts&) const = default;
};

/// Documented CSV column order for EventCounts rows.
std::string event_counts_csv_header();
std::string to_csv_row(const EventCounts& counts);

/// Draws n crop pairs (side shared per pair by default) and counts every
/// event. Deterministic for fixed (sampler, n) regardless of `threads`.
EventCounts estimate_events(const LayoutF& layout, const CropSampler& sampler, std::uint64_t n,
                            double tau = 0.05, unsigned threads = 1);

/// Same, but with the crop side held fixed at `side` (the per-s estimates the
/// analytic formulas are compared against).
EventCounts estimate_events_fixed_side(const LayoutF& layout, double side,
                                       const CropSampler& sampler, std::uint64_t n,
                                       double tau = 0.05, unsigned threads = 1);

struct JointEstimate {
    double p_hat = 0.0;
    double half_width = 0.0;  // 95% binomial: 1.96 sqrt(p(1-p)/n)
    std::uint64_t successes = 0;
    std::uint64_t n = 0;
};

/// Frequency of the simultaneous event with its confidence half-width.
/// Requires n >= 10^4.
JointEstimate estimate_joint(const LayoutF& layout, const CropSampler& sampler, std::uint64_t n,
                             unsigned threads = 1);

double binomial_half_width(std::uint64_t successes, std::uint64_t n);

}  // namespace cropcraft
