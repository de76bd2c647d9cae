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
#include <vector>

#include "cropcraft/geometry.hpp"

namespace cropcraft {

enum class Objective { AnalyticProduct, McJoint };

std::string to_string(Objective o);
Objective objective_from_string(std::string_view s);

/// Search domain around the canonical layout: gap, canvas height and trigger
/// offset grids, all in continuous coordinates.
struct SearchSpace {
    double r_l = 0.0;
    double e_l = 0.0;
    std::vector<double> gaps = {0.0};
    std::vector<double> canvas_heights;  // empty means {r_l}
    std::vector<double> trigger_offsets_x = {0.0};
    std::vector<double> trigger_offsets_y = {0.0};
    Direction direction = Direction::LeftRight;
    Objective objective = Objective::AnalyticProduct;
    double tau = 0.05;
    std::uint64_t mc_samples = 200'000;
    std::uint64_t seed = 0;
};

struct ScoredLayout {
    LayoutF layout;
    double score = 0.0;
    double ci_half_width = 0.0;  // 0 for the analytic objective
    double gap = 0.0, canvas_h = 0.0, off_x = 0.0, off_y = 0.0;
};

struct SkippedPoint {
    double gap = 0.0, canvas_h = 0.0, off_x = 0.0, off_y = 0.0;
    std::string reason;
};

struct SearchResult {
    std::vector<ScoredLayout> ranked;  // descending score, lexicographic tie-break
    std::vector<SkippedPoint> skipped;
};

/// Exhaustive evaluation of every valid grid point under the chosen
/// objective. Deterministic for a fixed seed; MC scores use one derived seed
/// per grid point.
SearchResult grid_search(const SearchSpace& space, unsigned threads = 1);

std::string search_result_csv(const SearchResult& result);

/// Closed-form valid-interval length for trigger containment along one axis,
/// with the shadow at the origin: min(e, r_len - s) - max(e + e_len - s, 0),
/// clamped at zero.
double trigger_interval_len(double e, double e_len, double r_len, double s);

struct OffsetScore {
    double offset = 0.0;
    double score = 0.0;       // MC trigger-retention frequency over s ~ U(e_l, S]
    double half_width = 0.0;
};

struct Theorem1Report {
    double r_l = 0.0, e_l = 0.0;
    std::uint64_t n = 0;
    std::vector<OffsetScore> offsets;     // offset applied on both axes
    bool mc_centered_max = false;         // centered >= all others minus combined CI
    bool exact_interval_max = false;      // interval product dominance on an s grid
    double exact_max_violation = 0.0;
    bool pass = false;
};

/// Checks that a centered trigger maximizes the trigger-retention integral:
/// by Monte Carlo across the given offsets (offsets must include 0), and
/// exactly via the closed-form interval product over an s grid. Failed CI
/// comparisons are retried once at 4x samples.
Theorem1Report verify_theorem1(double r_l, double e_l, const std::vector<double>& offsets,
                               std::uint64_t n, std::uint64_t seed = 0, unsigned threads = 1);

struct GapScore {
    double value = 0.0;  // gap or canvas height
    double score = 0.0;  // MC joint frequency
    double half_width = 0.0;
};

struct Theorem2Report {
    double r_l = 0.0, e_l = 0.0;
    std::uint64_t n = 0;
    std::vector<GapScore> gap_scores;     // gaps must include 0
    std::vector<GapScore> height_scores;  // heights must include r_l
    bool gap_zero_max = false;            // separation beyond combined 95% CIs
    bool gap_monotone = false;            // non-increasing within CI slack
    bool height_rl_max = false;
    bool pass = false;
};

/// Checks that zero gap and canvas height r_l maximize the MC joint score.
/// Failed comparisons are retried once at 4x samples.
Theorem2Report verify_theorem2(double r_l, double e_l, const std::vector<double>& gaps,
                               const std::vector<double>& heights, std::uint64_t n,
                               std::uint64_t seed = 0, unsigned threads = 1);

struct SymmetryReport {
    double r_l = 0.0, e_l = 0.0;
    std::uint64_t n = 0;
    double joint_lr = 0.0, joint_ud = 0.0;
    double retention_lr = 0.0, retention_ud = 0.0;
    double sigma_level = 3.0;
    bool pass = false;
};

/// Rotational-symmetry check: the up-down layout's estimates match the
/// left-right ones within `sigma_level` binomial standard deviations (one
/// retry at 4x samples).
SymmetryReport verify_symmetry(double r_l, double e_l, std::uint64_t n, std::uint64_t seed = 0,
                               unsigned threads = 1);

std::string theorem1_csv(const Theorem1Report& report);
std::string theorem2_csv(const Theorem2Report& report);
std::string text_summary(const Theorem1Report& report);
std::string text_summary(const Theorem2Report& report);
std::string text_summary(const SymmetryReport& report);

}  // namespace cropcraft
