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

#include "cropcraft/mc.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <vector>

#include "cropcraft/rng.hpp"

namespace cropcraft {

void CropSampler::validate() const {
    if (!(canvas_w > 0.0 && canvas_h > 0.0))
        throw std::invalid_argument("CropSampler: canvas sides must be positive");
    if (mode == CropMode::PaperSquare) {
        if (!(dist.min_side >= 0.0 && dist.min_side < dist.max_side))
            throw std::invalid_argument("CropSampler: need min_side < max_side");
        if (dist.max_side > std::min(canvas_w, canvas_h) + 1e-12)
            throw std::invalid_argument("CropSampler: max_side exceeds the canvas");
    }
}

CropSampler make_sampler(const LayoutF& layout, std::uint64_t seed) {
    CropSampler sampler;
    sampler.dist = {layout.trigger.w, std::min(layout.canvas_w, layout.canvas_h)};
    sampler.canvas_w = layout.canvas_w;
    sampler.canvas_h = layout.canvas_h;
    sampler.seed = seed;
    return sampler;
}

EventCounts& EventCounts::operator+=(const EventCounts& other) {
    n_samples += other.n_samples;
    trigger_retention += other.trigger_retention;
    reference_matching += other.reference_matching;
    view_disjoint += other.view_disjoint;
    view_disjoint_iou += other.view_disjoint_iou;
    joint += other.joint;
    sweet_spot += other.sweet_spot;
    information_leak += other.information_leak;
    missing_information += other.missing_information;
    return *this;
}

std::string event_counts_csv_header() {
    return "n_samples,trigger_retention,reference_matching,view_disjoint,view_disjoint_iou,"
           "joint,sweet_spot,information_leak,missing_information";
}

std::string to_csv_row(const EventCounts& c) {
    std::ostringstream os;
    os << c.n_samples << ',' << c.trigger_retention << ',' << c.reference_matching << ','
       << c.view_disjoint << ',' << c.view_disjoint_iou << ',' << c.joint << ',' << c.sweet_spot
       << ',' << c.information_leak << ',' << c.missing_information;
    return os.str();
}

double binomial_half_width(std::uint64_t successes, std::uint64_t n) {
    if (n == 0) return 0.0;
    const double p = static_cast<double>(successes) / static_cast<double>(n);
    return 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

namespace {

RectF sample_view(Philox& gen, const CropSampler& sampler, double side) {
    if (sampler.mode == CropMode::ResizedCrop) {
        // Area fraction and aspect ratio sampling; dimensions clamp into the
        // canvas instead of retrying.
        const double area = gen.uniform(0.2, 1.0) * sampler.canvas_w * sampler.canvas_h;
        const double aspect = gen.uniform(0.75, 4.0 / 3.0);
        double w = std::sqrt(area * aspect);
        double h = std::sqrt(area / aspect);
        w = std::min(w, sampler.canvas_w);
        h = std::min(h, sampler.canvas_h);
        const double x = gen.uniform(0.0, sampler.canvas_w - w);
        const double y = gen.uniform(0.0, sampler.canvas_h - h);
        return {x, y, w, h};
    }
    const double x = gen.uniform(0.0, sampler.canvas_w - side);
    const double y = gen.uniform(0.0, sampler.canvas_h - side);
    return {x, y, side, side};
}

struct PairEvents {
    bool trigger_retention, reference_matching, view_disjoint, view_disjoint_iou, joint;
    ViewPairClass cls;
};

PairEvents evaluate_pair(const RectF& v1, const RectF& v2, const LayoutF& layout, double tau) {
    PairEvents ev{};
    ev.trigger_retention = contains(v1, layout.trigger) && contains(layout.shadow, v1);
    ev.reference_matching = contains(layout.reference, v2);
    ev.view_disjoint = disjoint(v1, v2);
    ev.view_disjoint_iou = iou(v1, v2) <= tau;
    ev.joint = ev.trigger_retention && ev.reference_matching && ev.view_disjoint;
    ev.cls = classify_view_pair(v1, v2, layout);
    return ev;
}

void tally(EventCounts& counts, const PairEvents& ev) {
    ++counts.n_samples;
    counts.trigger_retention += ev.trigger_retention;
    counts.reference_matching += ev.reference_matching;
    counts.view_disjoint += ev.view_disjoint;
    counts.view_disjoint_iou += ev.view_disjoint_iou;
    counts.joint += ev.joint;
    counts.sweet_spot += ev.cls == ViewPairClass::SweetSpot;
    counts.information_leak += ev.cls == ViewPairClass::InformationLeak;
    counts.missing_information += ev.cls == ViewPairClass::MissingInformation;
}

// fixed_side < 0 means "draw the side from the sampler's distribution".
EventCounts run_chunk(const LayoutF& layout, const CropSampler& sampler, std::uint64_t begin,
                      std::uint64_t end, double tau, double fixed_side) {
    EventCounts counts;
    for (std::uint64_t i = begin; i < end; ++i) {
        Philox gen(sampler.seed, i);  // per-sample stream: order/thread independent
        double s1 = fixed_side, s2 = fixed_side;
        if (fixed_side < 0.0) {
            s1 = gen.uniform_excl_incl(sampler.dist.min_side, sampler.dist.max_side);
            s2 = sampler.shared_side
                     ? s1
                     : gen.uniform_excl_incl(sampler.dist.min_side, sampler.dist.max_side);
        }
        const RectF v1 = sample_view(gen, sampler, s1);
        const RectF v2 = sample_view(gen, sampler, s2);
        tally(counts, evaluate_pair(v1, v2, layout, tau));
    }
    return counts;
}

EventCounts run_parallel(const LayoutF& layout, const CropSampler& sampler, std::uint64_t n,
                         double tau, double fixed_side, unsigned threads) {
    validate(layout);
    sampler.validate();
    if (n < 1) throw std::invalid_argument("estimate: need n >= 1");
    if (std::abs(sampler.canvas_w - layout.canvas_w) > 1e-9 ||
        std::abs(sampler.canvas_h - layout.canvas_h) > 1e-9)
        throw std::invalid_argument("estimate: sampler canvas does not match the layout");
    if (fixed_side >= 0.0 &&
        !(fixed_side > 0.0 && fixed_side <= std::min(sampler.canvas_w, sampler.canvas_h)))
        throw std::invalid_argument("estimate: fixed side must fit the canvas");

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, n));

    if (threads <= 1) return run_chunk(layout, sampler, 0, n, tau, fixed_side);

    std::vector<EventCounts> partial(threads);
    std::vector<std::thread> pool;
    pool.reserve(threads);
    const std::uint64_t chunk = (n + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        const std::uint64_t begin = t * chunk;
        const std::uint64_t end = std::min(n, begin + chunk);
        pool.emplace_back([&, t, begin, end] {
            partial[t] = run_chunk(layout, sampler, begin, end, tau, fixed_side);
        });
    }
    for (auto& th : pool) th.join();

    EventCounts total;
    for (const auto& p : partial) total += p;  // associative merge, index order
    return total;
}

}  // namespace

EventCounts estimate_events(const LayoutF& layout, const CropSampler& sampler, std::uint64_t n,
                            double tau, unsigned threads) {
    return run_parallel(layout, sampler, n, tau, -1.0, threads);
}

EventCounts estimate_events_fixed_side(const LayoutF& layout, double side,
                                       const CropSampler& sampler, std::uint64_t n, double tau,
                                       unsigned threads) {
    return run_parallel(layout, sampler, n, tau, side, threads);
}

JointEstimate estimate_joint(const LayoutF& layout, const CropSampler& sampler, std::uint64_t n,
                             unsigned threads) {
    if (n < 10'000) throw std::invalid_argument("estimate_joint: need n >= 10^4");
    const EventCounts counts = estimate_events(layout, sampler, n, 0.0, threads);
    JointEstimate est;
    est.successes = counts.joint;
    est.n = n;
    est.p_hat = static_cast<double>(counts.joint) / static_cast<double>(n);
    est.half_width = binomial_half_width(counts.joint, n);
    return est;
}

}  // namespace cropcraft
