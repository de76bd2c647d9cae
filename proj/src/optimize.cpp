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

#include "cropcraft/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "cropcraft/mc.hpp"
#include "cropcraft/prob.hpp"
#include "cropcraft/rng.hpp"

namespace cropcraft {

std::string to_string(Objective o) {
    return o == Objective::AnalyticProduct ? "product" : "mc";
}

Objective objective_from_string(std::string_view s) {
    if (s == "product" || s == "analytic-product" || s == "analytic")
        return Objective::AnalyticProduct;
    if (s == "mc" || s == "mc-joint") return Objective::McJoint;
    throw std::invalid_argument("unknown objective: " + std::string(s));
}

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

}  // namespace

SearchResult grid_search(const SearchSpace& space, unsigned threads) {
    if (!(space.e_l > 0.0 && space.e_l < space.r_l))
        throw std::invalid_argument("grid_search: need 0 < e_l < r_l");
    std::vector<double> heights = space.canvas_heights;
    if (heights.empty()) heights = {space.r_l};
    if (space.gaps.empty() || space.trigger_offsets_x.empty() || space.trigger_offsets_y.empty())
        throw std::invalid_argument("grid_search: empty grid");

    SearchResult result;
    std::uint64_t point_index = 0;
    for (double gap : space.gaps) {
        for (double ch : heights) {
            for (double ox : space.trigger_offsets_x) {
                for (double oy : space.trigger_offsets_y) {
                    const std::uint64_t idx = point_index++;
                    LayoutF layout;
                    try {
                        layout = make_layout_f(space.direction, space.r_l, space.e_l, gap, ch,
                                               ox, oy);
                    } catch (const std::invalid_argument& e) {
                        result.skipped.push_back({gap, ch, ox, oy, e.what()});
                        continue;
                    }
                    ScoredLayout scored{layout, 0.0, 0.0, gap, ch, ox, oy};
                    if (space.objective == Objective::AnalyticProduct) {
                        ProbParams params;
                        params.r_l = space.r_l;
                        params.e_l = space.e_l;
                        params.g = gap;
                        params.tau = space.tau;
                        scored.score = p_joint(layout, params);
                    } else {
                        CropSampler sampler = make_sampler(layout, derive_seed(space.seed, idx));
                        const JointEstimate est =
                            estimate_joint(layout, sampler, space.mc_samples, threads);
                        scored.score = est.p_hat;
                        scored.ci_half_width = est.half_width;
                    }
                    result.ranked.push_back(scored);
                }
            }
        }
    }
    if (result.ranked.empty()) throw std::invalid_argument("grid_search: no valid grid points");

    std::sort(result.ranked.begin(), result.ranked.end(),
              [](const ScoredLayout& a, const ScoredLayout& b) {
                  if (a.score != b.score) return a.score > b.score;
                  auto key = [](const ScoredLayout& s) {
                      return std::make_tuple(s.layout.canvas_w, s.layout.canvas_h,
                                             s.layout.reference.x, s.layout.reference.y,
                                             s.layout.shadow.x, s.layout.shadow.y,
                                             s.layout.trigger.x, s.layout.trigger.y);
                  };
                  return key(a) < key(b);
              });
    return result;
}

std::string search_result_csv(const SearchResult& result) {
    std::ostringstream os;
    os << "rank,score,ci95,gap,canvas_h,trig_off_x,trig_off_y,canvas_w,ref_x,ref_y,"
          "shadow_x,shadow_y,trig_x,trig_y,side_r,side_e,direction\n";
    int rank = 1;
    for (const auto& s : result.ranked) {
        const auto& l = s.layout;
        os << rank++ << ',' << fmt(s.score) << ',' << fmt(s.ci_half_width) << ',' << fmt(s.gap)
           << ',' << fmt(s.canvas_h) << ',' << fmt(s.off_x) << ',' << fmt(s.off_y) << ','
           << fmt(l.canvas_w) << ',' << fmt(l.reference.x) << ',' << fmt(l.reference.y) << ','
           << fmt(l.shadow.x) << ',' << fmt(l.shadow.y) << ',' << fmt(l.trigger.x) << ','
           << fmt(l.trigger.y) << ',' << fmt(l.reference.w) << ',' << fmt(l.trigger.w) << ','
           << to_string(l.direction) << '\n';
    }
    for (const auto& p : result.skipped)
        os << "skipped,,," << fmt(p.gap) << ',' << fmt(p.canvas_h) << ',' << fmt(p.off_x) << ','
           << fmt(p.off_y) << ",,,,,,,,,," << p.reason << '\n';
    return os.str();
}

double trigger_interval_len(double e, double e_len, double r_len, double s) {
    const double lo = std::max(e + e_len - s, 0.0);
    const double hi = std::min(e, r_len - s);
    return std::max(0.0, hi - lo);
}

namespace {

struct Retention {
    double p_hat, half_width;
};

Retention retention_estimate(double r_l, double e_l, double offset, std::uint64_t n,
                             std::uint64_t seed, unsigned threads) {
    const LayoutF layout =
        make_layout_f(Direction::LeftRight, r_l, e_l, 0.0, r_l, offset, offset);
    const CropSampler sampler = make_sampler(layout, seed);
    const EventCounts counts = estimate_events(layout, sampler, n, 0.0, threads);
    return {static_cast<double>(counts.trigger_retention) / static_cast<double>(n),
            binomial_half_width(counts.trigger_retention, n)};
}

}  // namespace

Theorem1Report verify_theorem1(double r_l, double e_l, const std::vector<double>& offsets,
                               std::uint64_t n, std::uint64_t seed, unsigned threads) {
    if (std::find(offsets.begin(), offsets.end(), 0.0) == offsets.end())
        throw std::invalid_argument("verify_theorem1: offsets must include 0");

    Theorem1Report report;
    report.r_l = r_l;
    report.e_l = e_l;
    report.n = n;

    for (std::size_t i = 0; i < offsets.size(); ++i) {
        const Retention r =
            retention_estimate(r_l, e_l, offsets[i], n, derive_seed(seed, i), threads);
        report.offsets.push_back({offsets[i], r.p_hat, r.half_width});
    }
    const auto center = std::find_if(report.offsets.begin(), report.offsets.end(),
                                     [](const OffsetScore& o) { return o.offset == 0.0; });

    report.mc_centered_max = true;
    for (std::size_t i = 0; i < report.offsets.size(); ++i) {
        auto& o = report.offsets[i];
        if (o.offset == 0.0) continue;
        if (center->score >= o.score - (center->half_width + o.half_width)) continue;
        // One retry at 4x samples before declaring failure.
        const Retention again =
            retention_estimate(r_l, e_l, o.offset, 4 * n, derive_seed(seed, 1000 + i), threads);
        const Retention cagain =
            retention_estimate(r_l, e_l, 0.0, 4 * n, derive_seed(seed, 2000 + i), threads);
        if (cagain.p_hat < again.p_hat - (cagain.half_width + again.half_width))
            report.mc_centered_max = false;
    }

    // Exact interval-product dominance over a dense s grid. The centered and
    // offset products agree algebraically on the unclipped branch, so a
    // rounding-level slack stands in for exact equality there.
    const double center_off = (r_l - e_l) / 2.0;
    const double slack = 1e-12;
    report.exact_interval_max = true;
    report.exact_max_violation = 0.0;
    const int grid_points = 257;
    for (int k = 0; k <= grid_points; ++k) {
        const double s = e_l + (r_l - e_l) * k / grid_points;
        const double centered = trigger_interval_len(center_off, e_l, r_l, s);
        const double base = centered * centered;
        for (double off : offsets) {
            const double lx = trigger_interval_len(center_off + off, e_l, r_l, s);
            const double violation = lx * lx - base;
            report.exact_max_violation = std::max(report.exact_max_violation, violation);
            if (violation > slack * std::max(1.0, base)) report.exact_interval_max = false;
        }
    }

    report.pass = report.mc_centered_max && report.exact_interval_max;
    return report;
}

namespace {

JointEstimate joint_for(double r_l, double e_l, double gap, double canvas_h, std::uint64_t n,
                        std::uint64_t seed, unsigned threads) {
    const LayoutF layout = make_layout_f(Direction::LeftRight, r_l, e_l, gap, canvas_h);
    const CropSampler sampler = make_sampler(layout, seed);
    return estimate_joint(layout, sampler, n, threads);
}

// True when a dominates b beyond the combined 95% CIs.
bool separated(const GapScore& a, const GapScore& b) {
    return a.score - a.half_width > b.score + b.half_width;
}

}  // namespace

Theorem2Report verify_theorem2(double r_l, double e_l, const std::vector<double>& gaps,
                               const std::vector<double>& heights, std::uint64_t n,
                               std::uint64_t seed, unsigned threads) {
    if (std::find(gaps.begin(), gaps.end(), 0.0) == gaps.end())
        throw std::invalid_argument("verify_theorem2: gaps must include 0");
    if (std::find(heights.begin(), heights.end(), r_l) == heights.end())
        throw std::invalid_argument("verify_theorem2: heights must include r_l");

    Theorem2Report report;
    report.r_l = r_l;
    report.e_l = e_l;
    report.n = n;

    auto scan = [&](const std::vector<double>& values, bool vary_gap,
                    std::uint64_t salt) {
        std::vector<GapScore> scores;
        for (std::size_t i = 0; i < values.size(); ++i) {
            const double gap = vary_gap ? values[i] : 0.0;
            const double ch = vary_gap ? r_l : values[i];
            const JointEstimate est =
                joint_for(r_l, e_l, gap, ch, n, derive_seed(seed, salt + i), threads);
            scores.push_back({values[i], est.p_hat, est.half_width});
        }
        return scores;
    };
    report.gap_scores = scan(gaps, true, 0);
    report.height_scores = scan(heights, false, 100);

    auto check_max = [&](std::vector<GapScore>& scores, double best_value, bool vary_gap,
                         std::uint64_t salt) {
        const auto best = std::find_if(scores.begin(), scores.end(),
                                       [&](const GapScore& g) { return g.value == best_value; });
        bool ok = true;
        for (std::size_t i = 0; i < scores.size(); ++i) {
            auto& other = scores[i];
            if (other.value == best_value) continue;
            if (separated(*best, other)) continue;
            // Retry the ambiguous comparison once at 4x samples.
            const double gap_b = vary_gap ? best_value : 0.0;
            const double ch_b = vary_gap ? r_l : best_value;
            const double gap_o = vary_gap ? other.value : 0.0;
            const double ch_o = vary_gap ? r_l : other.value;
            const JointEstimate b2 =
                joint_for(r_l, e_l, gap_b, ch_b, 4 * n, derive_seed(seed, salt + 10 + i), threads);
            const JointEstimate o2 =
                joint_for(r_l, e_l, gap_o, ch_o, 4 * n, derive_seed(seed, salt + 60 + i), threads);
            if (!(b2.p_hat - b2.half_width > o2.p_hat + o2.half_width)) ok = false;
        }
        return ok;
    };

    report.gap_zero_max = check_max(report.gap_scores, 0.0, true, 1000);
    report.height_rl_max = check_max(report.height_scores, r_l, false, 2000);

    // First differences of the gap scan must not increase beyond CI noise.
    report.gap_monotone = true;
    std::vector<GapScore> sorted_gaps = report.gap_scores;
    std::sort(sorted_gaps.begin(), sorted_gaps.end(),
              [](const GapScore& a, const GapScore& b) { return a.value < b.value; });
    for (std::size_t i = 0; i + 1 < sorted_gaps.size(); ++i) {
        if (sorted_gaps[i + 1].score - sorted_gaps[i].score >
            sorted_gaps[i].half_width + sorted_gaps[i + 1].half_width)
            report.gap_monotone = false;
    }

    report.pass = report.gap_zero_max && report.height_rl_max && report.gap_monotone;
    return report;
}

SymmetryReport verify_symmetry(double r_l, double e_l, std::uint64_t n, std::uint64_t seed,
                               unsigned threads) {
    SymmetryReport report;
    report.r_l = r_l;
    report.e_l = e_l;
    report.n = n;

    auto run = [&](std::uint64_t nn, std::uint64_t salt) {
        const LayoutF lr = make_optimal_layout_f(Direction::LeftRight, r_l, e_l);
        const LayoutF ud = make_optimal_layout_f(Direction::UpDown, r_l, e_l);
        const EventCounts clr =
            estimate_events(lr, make_sampler(lr, derive_seed(seed, salt)), nn, 0.0, threads);
        const EventCounts cud =
            estimate_events(ud, make_sampler(ud, derive_seed(seed, salt + 1)), nn, 0.0, threads);
        return std::make_pair(clr, cud);
    };

    auto agrees = [&](std::uint64_t a, std::uint64_t b, std::uint64_t nn) {
        const double pa = static_cast<double>(a) / nn, pb = static_cast<double>(b) / nn;
        const double se =
            std::sqrt(pa * (1 - pa) / nn + pb * (1 - pb) / nn);
        return std::abs(pa - pb) <= report.sigma_level * se;
    };

    auto [clr, cud] = run(n, 0);
    report.joint_lr = static_cast<double>(clr.joint) / n;
    report.joint_ud = static_cast<double>(cud.joint) / n;
    report.retention_lr = static_cast<double>(clr.trigger_retention) / n;
    report.retention_ud = static_cast<double>(cud.trigger_retention) / n;

    bool ok = agrees(clr.joint, cud.joint, n) &&
              agrees(clr.trigger_retention, cud.trigger_retention, n);
    if (!ok) {
        auto [clr2, cud2] = run(4 * n, 100);
        ok = agrees(clr2.joint, cud2.joint, 4 * n) &&
             agrees(clr2.trigger_retention, cud2.trigger_retention, 4 * n);
    }
    report.pass = ok;
    return report;
}

std::string theorem1_csv(const Theorem1Report& r) {
    std::ostringstream os;
    os << "offset,retention_mc,ci95\n";
    for (const auto& o : r.offsets)
        os << fmt(o.offset) << ',' << fmt(o.score) << ',' << fmt(o.half_width) << '\n';
    return os.str();
}

std::string theorem2_csv(const Theorem2Report& r) {
    std::ostringstream os;
    os << "kind,value,joint_mc,ci95\n";
    for (const auto& g : r.gap_scores)
        os << "gap," << fmt(g.value) << ',' << fmt(g.score) << ',' << fmt(g.half_width) << '\n';
    for (const auto& h : r.height_scores)
        os << "canvas_h," << fmt(h.value) << ',' << fmt(h.score) << ',' << fmt(h.half_width)
           << '\n';
    return os.str();
}

std::string text_summary(const Theorem1Report& r) {
    std::ostringstream os;
    os << "centered-trigger optimality (r_l=" << fmt(r.r_l) << ", e_l=" << fmt(r.e_l)
       << ", n=" << r.n << ")\n";
    for (const auto& o : r.offsets)
        os << "  offset " << fmt(o.offset) << ": retention " << fmt(o.score) << " +- "
           << fmt(o.half_width) << '\n';
    os << "  mc centered max: " << (r.mc_centered_max ? "pass" : "FAIL") << '\n';
    os << "  exact interval product max: " << (r.exact_interval_max ? "pass" : "FAIL")
       << " (max violation " << fmt(r.exact_max_violation) << ")\n";
    return os.str();
}

std::string text_summary(const Theorem2Report& r) {
    std::ostringstream os;
    os << "zero-gap / minimal-canvas optimality (r_l=" << fmt(r.r_l) << ", e_l=" << fmt(r.e_l)
       << ", n=" << r.n << ")\n";
    for (const auto& g : r.gap_scores)
        os << "  gap " << fmt(g.value) << ": joint " << fmt(g.score) << " +- "
           << fmt(g.half_width) << '\n';
    for (const auto& h : r.height_scores)
        os << "  canvas_h " << fmt(h.value) << ": joint " << fmt(h.score) << " +- "
           << fmt(h.half_width) << '\n';
    os << "  gap 0 max: " << (r.gap_zero_max ? "pass" : "FAIL") << '\n';
    os << "  gap scan monotone: " << (r.gap_monotone ? "pass" : "FAIL") << '\n';
    os << "  canvas_h r_l max: " << (r.height_rl_max ? "pass" : "FAIL") << '\n';
    return os.str();
}

std::string text_summary(const SymmetryReport& r) {
    std::ostringstream os;
    os << "rotational symmetry (r_l=" << fmt(r.r_l) << ", e_l=" << fmt(r.e_l) << ", n=" << r.n
       << ")\n";
    os << "  joint lr " << fmt(r.joint_lr) << " vs ud " << fmt(r.joint_ud) << '\n';
    os << "  retention lr " << fmt(r.retention_lr) << " vs ud " << fmt(r.retention_ud) << '\n';
    os << "  within " << fmt(r.sigma_level) << " sigma: " << (r.pass ? "pass" : "FAIL") << '\n';
    return os.str();
}

}  // namespace cropcraft
