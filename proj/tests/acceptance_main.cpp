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

// Acceptance suite: every check runs at its stated tolerance and prints one
// pass/fail line. Statistical comparisons retry once at 4x samples before
// counting as failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "cropcraft/craft.hpp"
#include "cropcraft/feature.hpp"
#include "cropcraft/mc.hpp"
#include "cropcraft/optimize.hpp"
#include "cropcraft/prob.hpp"
#include "cropcraft/rng.hpp"

using namespace cropcraft;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d: %s%s%s\n", pass ? "PASS" : "FAIL", criterion, name.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// ---------------------------------------------------------------- criterion 1

// One (r_l, e_l, g) configuration: p1 and p2 vs Monte Carlo at n = 10^6 on a
// 20-point s grid, 3 binomial sigma per comparison, one retry at 4n.
bool agree_config(double r_l, double e_l, double g, std::uint64_t seed, int& retries) {
    const LayoutF layout = make_layout_f(Direction::LeftRight, r_l, e_l, g, r_l);
    ProbParams prm;
    prm.r_l = r_l;
    prm.e_l = e_l;
    prm.g = g;
    const double S = prm.max_side();
    const std::uint64_t n = 1'000'000;

    auto within = [](double p, std::uint64_t successes, std::uint64_t nn) {
        const double p_hat = static_cast<double>(successes) / static_cast<double>(nn);
        return std::abs(p_hat - p) <= 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(nn));
    };

    bool all_ok = true;
    for (int k = 1; k <= 20; ++k) {
        const double s = e_l + (S - e_l) * k / 20.0;
        const CropSampler sampler = make_sampler(layout, derive_seed(seed, k));
        const EventCounts ev = estimate_events_fixed_side(layout, s, sampler, n, prm.tau);
        bool ok = within(p1(s, prm), ev.trigger_retention, n) &&
                  within(p2(s, prm), ev.reference_matching, n) &&
                  within(p3(s, prm), ev.view_disjoint_iou, n);
        if (!ok) {
            ++retries;
            const CropSampler retry = make_sampler(layout, derive_seed(seed, 1000 + k));
            const EventCounts ev2 = estimate_events_fixed_side(layout, s, retry, 4 * n, prm.tau);
            ok = within(p1(s, prm), ev2.trigger_retention, 4 * n) &&
                 within(p2(s, prm), ev2.reference_matching, 4 * n) &&
                 within(p3(s, prm), ev2.view_disjoint_iou, 4 * n);
        }
        all_ok = all_ok && ok;
    }
    return all_ok;
}

void criterion1() {
    bool pass = true;
    std::string detail;
    int retries = 0;
    int idx = 0;
    for (auto [r_l, e_l] : {std::pair{2.0, 1.0}, {224.0, 50.0}, {32.0, 8.0}}) {
        for (double g : {0.0, e_l / 2.0, e_l}) {
            const auto t0 = Clock::now();
            const bool ok = agree_config(r_l, e_l, g, 42 + 100 * idx++, retries);
            const double dt = seconds_since(t0);
            if (!ok || dt >= 120.0) pass = false;
            char buf[96];
            std::snprintf(buf, sizeof buf, "(%g,%g,g=%g): %s %.1fs; ", r_l, e_l, g,
                          ok ? "ok" : "MISMATCH", dt);
            detail += buf;
        }
    }
    if (retries) detail += "retries=" + std::to_string(retries);
    report(1, "analytic p1/p2/p3 vs Monte Carlo within 3 sigma at n=10^6", pass, detail);
}

// ---------------------------------------------------------------- criterion 2

void criterion2() {
    const double r_l = 2.0, e_l = 1.0;
    const std::vector<double> offsets = {0.0, -0.1 * r_l, 0.1 * r_l, -0.2 * r_l, 0.2 * r_l};
    const Theorem1Report rep = verify_theorem1(r_l, e_l, offsets, 1'000'000, 7);

    // Raw argmax on top of the report's CI-aware check.
    double best = -1.0, centered = 0.0;
    for (const auto& o : rep.offsets) {
        best = std::max(best, o.score);
        if (o.offset == 0.0) centered = o.score;
    }
    const bool argmax_centered = centered >= best;

    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "centered retention %.6f is argmax: %s; exact interval dominance: %s "
                  "(max violation %.3g)",
                  centered, argmax_centered ? "yes" : "NO", rep.exact_interval_max ? "yes" : "NO",
                  rep.exact_max_violation);
    report(2, "centered trigger maximizes retention (MC + exact interval product)",
           rep.pass && argmax_centered, buf);
}

// ---------------------------------------------------------------- criterion 3

void criterion3() {
    const double r_l = 2.0, e_l = 1.0;
    const Theorem2Report rep =
        verify_theorem2(r_l, e_l, {0.0, 0.25 * e_l, 0.5 * e_l, e_l, 2.0 * e_l},
                        {r_l, 1.25 * r_l, 1.5 * r_l}, 1'000'000, 11);
    std::string detail = "gap scores:";
    for (const auto& gsc : rep.gap_scores) {
        char buf[48];
        std::snprintf(buf, sizeof buf, " %.5f", gsc.score);
        detail += buf;
    }
    detail += "; height scores:";
    for (const auto& h : rep.height_scores) {
        char buf[48];
        std::snprintf(buf, sizeof buf, " %.5f", h.score);
        detail += buf;
    }
    report(3, "zero gap and canvas height r_l maximize the MC joint score beyond 95% CIs",
           rep.gap_zero_max && rep.height_rl_max, detail);
}

// ---------------------------------------------------------------- criterion 4

void criterion4() {
    // Reduced 4-parameter space (gap, canvas height, trigger offset x/y); the
    // gap dimension uses the documented analytic grid {0, e_l/2, e_l, 2 e_l},
    // on which the factorized and true objectives are contracted to agree.
    SearchSpace space;
    space.r_l = 2.0;
    space.e_l = 1.0;
    space.gaps = {0.0, 0.5, 1.0, 2.0};
    space.canvas_heights = {2.0, 2.5, 3.0};
    space.trigger_offsets_x = {-0.2, 0.0, 0.2};
    space.trigger_offsets_y = {-0.2, 0.0, 0.2};
    space.seed = 13;
    space.mc_samples = 300'000;

    const LayoutF target = make_optimal_layout_f(Direction::LeftRight, 2.0, 1.0);

    space.objective = Objective::AnalyticProduct;
    const SearchResult analytic = grid_search(space);
    space.objective = Objective::McJoint;
    const SearchResult mc = grid_search(space);

    const bool product_ok = analytic.ranked[0].layout == target;
    const bool mc_ok = mc.ranked[0].layout == target;
    char buf[128];
    std::snprintf(buf, sizeof buf,
                  "product argmax %s, mc argmax %s, objectives agree: %s (grid %zu points)",
                  product_ok ? "= canonical" : "WRONG", mc_ok ? "= canonical" : "WRONG",
                  (analytic.ranked[0].layout == mc.ranked[0].layout) ? "yes" : "NO",
                  analytic.ranked.size());
    report(4, "grid search recovers the canonical layout under both objectives",
           product_ok && mc_ok, buf);
}

// ---------------------------------------------------------------- criterion 5

void criterion5() {
    Philox gen(271828, 0);
    const double h = 1e-6;
    auto loss_at = [](double a, double p) { return 1.0 - a / std::sqrt(a * a + p); };

    double max_rel = 0.0;
    bool signs_ok = true;
    for (int i = 0; i < 1000; ++i) {
        const double a = gen.uniform(0.01, 10.0);
        const double p = gen.uniform(0.01, 10.0);
        const LossGradients g = loss_gradients(a, p);
        const double ha = h * std::max(1.0, std::abs(a));
        const double hp = h * std::max(1.0, std::abs(p));
        const double fa = (loss_at(a + ha, p) - loss_at(a - ha, p)) / (2 * ha);
        const double fp = (loss_at(a, p + hp) - loss_at(a, p - hp)) / (2 * hp);
        max_rel = std::max(max_rel, std::abs(g.d_alpha - fa) / std::abs(g.d_alpha));
        max_rel = std::max(max_rel, std::abs(g.d_perp_sq - fp) / std::abs(g.d_perp_sq));
        signs_ok = signs_ok && g.d_alpha <= 0.0 && g.d_perp_sq >= 0.0;
    }

    double max_recon = 0.0;
    for (int i = 0; i < 200; ++i) {
        const int d = 2 + static_cast<int>(gen.next_below(62));
        std::vector<double> u(d), v(d);
        double un = 0.0;
        for (auto& x : u) {
            x = gen.uniform(-1.0, 1.0);
            un += x * x;
        }
        un = std::sqrt(un);
        for (auto& x : u) x /= un;
        for (auto& x : v) x = gen.uniform(-10.0, 10.0);
        const Decomposition dec = decompose({u, v});
        double err = 0.0, vn = 0.0;
        for (int k = 0; k < d; ++k) {
            const double r = dec.alpha * u[k] + dec.v_perp[k] - v[k];
            err += r * r;
            vn += v[k] * v[k];
        }
        max_recon = std::max(max_recon, std::sqrt(err / vn));
    }

    char buf[128];
    std::snprintf(buf, sizeof buf, "max FD rel err %.3g (< 1e-4), max recon err %.3g (< 1e-10)",
                  max_rel, max_recon);
    report(5, "gradients match finite differences; decomposition reconstructs; signs hold",
           max_rel < 1e-4 && max_recon < 1e-10 && signs_ok, buf);
}

// ------------------------------------------------------------ criteria 6 & 7

RasterImage synth_image(int w, int h, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> byte(0, 255);
    RasterImage img;
    img.width = w;
    img.height = h;
    img.pixels.resize(static_cast<std::size_t>(w) * h * 3);
    for (auto& p : img.pixels) p = static_cast<std::uint8_t>(byte(rng));
    return img;
}

std::vector<std::uint8_t> file_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void criteria6and7() {
    const fs::path base = fs::temp_directory_path() / "cropcraft_acceptance";
    fs::remove_all(base);
    const fs::path refs = base / "refs", shadows = base / "shadows";
    fs::create_directories(refs);
    fs::create_directories(shadows);
    for (int i = 0; i < 24; ++i) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "src_%03d.png", i);
        save_image(synth_image(256, 256, 900 + i), refs / buf);
        save_image(synth_image(256, 256, 7000 + i), shadows / buf);
    }
    save_image(synth_image(4, 4, 1), base / "trigger.png");

    PoisonRecipe recipe;
    recipe.reference_dir = refs;
    recipe.shadow_dir = shadows;
    recipe.trigger_path = base / "trigger.png";
    recipe.output_dir = base / "out1";
    recipe.image_side = 224;
    recipe.trigger_side = 50;
    recipe.count = 650;
    recipe.seed = 20260810;

    const auto t0 = Clock::now();
    const PoisonManifest manifest = craft_dataset(recipe);
    const double run1 = seconds_since(t0);

    PoisonRecipe second = recipe;
    second.output_dir = base / "out2";
    const auto t1 = Clock::now();
    craft_dataset(second);
    const double run2 = seconds_since(t1);

    bool identical = file_bytes(recipe.output_dir / "manifest.txt") ==
                     file_bytes(second.output_dir / "manifest.txt");
    bool geometry_ok = manifest.records.size() == 650;
    bool consumable = true;

    const RasterImage trig =
        resize(load_image(recipe.trigger_path), recipe.trigger_side, recipe.trigger_side);
    const PoisonManifest reread = load_manifest(recipe.output_dir / "manifest.txt");
    if (reread.records != manifest.records) geometry_ok = false;
    for (const auto& rec : reread.records) {
        try {
            validate(rec.layout);
        } catch (const std::exception&) {
            geometry_ok = false;
            continue;
        }
        const auto& l = rec.layout;
        if (!contains(l.shadow, l.trigger) || !disjoint(l.reference, l.shadow) ||
            l.reference.area() + l.shadow.area() != l.canvas_w * l.canvas_h)
            geometry_ok = false;
        RasterImage img;
        try {
            img = load_image(recipe.output_dir / rec.filename);
        } catch (const std::exception&) {
            consumable = false;
            continue;
        }
        if (img.width != l.canvas_w || img.height != l.canvas_h) geometry_ok = false;
        if (crop(img, l.trigger) != trig) geometry_ok = false;
        identical = identical && file_bytes(recipe.output_dir / rec.filename) ==
                                     file_bytes(second.output_dir / rec.filename);
    }

    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "650 composites, runs %.1fs/%.1fs (< 60s), byte-identical: %s, geometry: %s",
                  run1, run2, identical ? "yes" : "NO", geometry_ok ? "ok" : "VIOLATED");
    report(6, "ImageNet-scale crafting: deterministic, valid, fast",
           identical && geometry_ok && run1 < 60.0 && run2 < 60.0, buf);

    report(7,
           "training-dependent results are out of desk scope by design; the crafted "
           "dataset and manifest are consumable by an external pipeline",
           consumable, consumable ? "all 650 composites decode and match their records" : "");
    fs::remove_all(base);
}

}  // namespace

int main() {
    const auto t0 = Clock::now();
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criteria6and7();
    std::printf("acceptance: %s (%d failure%s, %.1fs total)\n", g_failures ? "FAIL" : "PASS",
                g_failures, g_failures == 1 ? "" : "s", seconds_since(t0));
    return g_failures ? 1 : 0;
}
