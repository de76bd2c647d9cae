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

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cropcraft/craft.hpp"
#include "cropcraft/feature.hpp"
#include "cropcraft/mc.hpp"
#include "cropcraft/optimize.hpp"
#include "cropcraft/prob.hpp"
#include "cropcraft/version.hpp"

namespace cc = cropcraft;

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// Flat key=value config file. Values are injected as flags for the chosen
// subcommand unless the flag already appears on the command line, which gives
// the precedence: flags > config > defaults.

std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw cc::IoError("cannot open config file: " + path);
    std::vector<std::pair<std::string, std::string>> kv;
    std::string line;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto eq = line.find('=', first);
        if (eq == std::string::npos)
            throw std::invalid_argument("config: expected key=value, got '" + line + "'");
        auto strip = [](std::string s) {
            const auto b = s.find_first_not_of(" \t");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        kv.emplace_back(strip(line.substr(first, eq - first)), strip(line.substr(eq + 1)));
    }
    return kv;
}

std::vector<std::string> apply_config(const std::vector<std::string>& args, CLI::App& app) {
    std::string config_path;
    std::string subcommand;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
        else if (subcommand.empty() && !args[i].empty() && args[i][0] != '-' &&
                 app.get_subcommand_no_throw(args[i]) != nullptr)
            subcommand = args[i];
    }
    if (config_path.empty() || subcommand.empty()) return args;

    CLI::App* sub = app.get_subcommand_no_throw(subcommand);
    std::vector<std::string> out = args;
    for (const auto& [key, value] : read_config(config_path)) {
        const std::string flag = "--" + key;
        const CLI::Option* opt = sub->get_option_no_throw(flag);
        if (opt == nullptr) continue;  // key for another subcommand
        bool present = false;
        for (const auto& a : args)
            if (a == flag || a.rfind(flag + "=", 0) == 0) present = true;
        if (present) continue;
        out.push_back(flag);
        if (opt->get_items_expected_max() > 1) {
            // vector option: a,b,c in the config becomes separate tokens
            std::istringstream vs(value);
            std::string item;
            while (std::getline(vs, item, ',')) out.push_back(item);
        } else {
            out.push_back(value);
        }
    }
    return out;
}

// Effective configuration of a parsed subcommand, for echoing into outputs.
std::vector<std::string> config_echo(const CLI::App& sub) {
    std::vector<std::string> lines;
    for (const CLI::Option* opt : sub.get_options()) {
        const std::string name = opt->get_name();
        if (name.empty() || name == "--help" || name == "--config") continue;
        std::string value = opt->count() ? opt->results()[0] : opt->get_default_str();
        if (opt->results().size() > 1) {
            value = opt->results()[0];
            for (std::size_t i = 1; i < opt->results().size(); ++i) value += "," + opt->results()[i];
        }
        if (value.empty()) continue;
        lines.push_back(name.substr(2) + "=" + value);
    }
    std::sort(lines.begin(), lines.end());
    return lines;
}

void write_text(const std::string& path, const std::string& body,
                const std::vector<std::string>& echo) {
    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!path.empty() && path != "-") {
        file.open(path, std::ios::binary);
        if (!file) throw cc::IoError("cannot write " + path);
        os = &file;
    }
    for (const auto& line : echo) *os << "# " << line << '\n';
    *os << body;
    if (!*os) throw cc::IoError("write failed: " + path);
}

unsigned resolve_threads(unsigned threads) {
    if (threads > 0) return threads;
    if (const char* env = std::getenv("NA_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return 1;
}

std::vector<cc::Direction> parse_layouts(const std::vector<std::string>& names) {
    std::vector<cc::Direction> out;
    for (const auto& n : names) out.push_back(cc::direction_from_string(n));
    return out;
}

// ---------------------------------------------------------------------------

struct CraftArgs {
    std::string ref_dir, shadow_dir, trigger, out;
    int count = 0, image_side = 224, trigger_side = 50;
    double alpha = 1.0;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    std::vector<std::string> layouts;
};

int run_craft(const CraftArgs& a, const std::vector<std::string>& echo) {
    cc::PoisonRecipe recipe;
    recipe.reference_dir = a.ref_dir;
    recipe.shadow_dir = a.shadow_dir;
    recipe.trigger_path = a.trigger;
    recipe.output_dir = a.out;
    recipe.count = a.count;
    recipe.image_side = a.image_side;
    recipe.trigger_side = a.trigger_side;
    recipe.alpha = a.alpha;
    recipe.seed = a.seed;
    if (!a.layouts.empty()) recipe.layouts = parse_layouts(a.layouts);

    std::cerr << "crafting " << recipe.count << " poisons into " << a.out << "\n";
    const int step = std::max(1, recipe.count / 20);
    auto progress = [step](int done, int total) {
        if (done % step == 0 || done == total)
            std::cerr << "  " << done << "/" << total << "\n";
    };
    const cc::PoisonManifest manifest =
        cc::craft_dataset(recipe, resolve_threads(a.threads), echo, progress);
    std::cerr << "wrote " << manifest.records.size() << " composites + manifest.txt\n";
    return 0;
}

struct AnalyzeArgs {
    double image_side = 2.0, trigger_side = 1.0, gap = 0.0, canvas_h = 0.0, tau = 0.05;
    std::uint64_t samples = 1'000'000;
    int points = 20;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    std::string direction = "lr";
    std::string out;
};

int run_analyze(const AnalyzeArgs& a, const std::vector<std::string>& echo) {
    if (a.samples == 0) throw CLI::ValidationError("--samples", "must be positive");
    if (a.points < 1) throw CLI::ValidationError("--points", "must be >= 1");
    const double ch = a.canvas_h > 0.0 ? a.canvas_h : a.image_side;
    const cc::LayoutF layout = cc::make_layout_f(cc::direction_from_string(a.direction),
                                                 a.image_side, a.trigger_side, a.gap, ch);
    const cc::CropSampler sampler = cc::make_sampler(layout, a.seed);
    const double e_l = a.trigger_side;
    const double S = std::min(layout.canvas_w, layout.canvas_h);
    const unsigned threads = resolve_threads(a.threads);

    std::ostringstream csv;
    csv << "s,p1_analytic,p1_mc,p1_ci95,p2_analytic,p2_mc,p2_ci95,p3_analytic,p3_mc,p3_ci95,"
        << cc::event_counts_csv_header() << '\n';
    for (int k = 1; k <= a.points; ++k) {
        const double s = e_l + (S - e_l) * k / a.points;
        const cc::EventCounts ev =
            cc::estimate_events_fixed_side(layout, s, sampler, a.samples, a.tau, threads);
        const double n = static_cast<double>(ev.n_samples);
        auto frac = [&](std::uint64_t c) { return static_cast<double>(c) / n; };
        csv << fmt(s) << ',' << fmt(cc::layout_p1(s, layout)) << ','
            << fmt(frac(ev.trigger_retention)) << ','
            << fmt(cc::binomial_half_width(ev.trigger_retention, ev.n_samples)) << ','
            << fmt(cc::layout_p2(s, layout)) << ',' << fmt(frac(ev.reference_matching)) << ','
            << fmt(cc::binomial_half_width(ev.reference_matching, ev.n_samples)) << ','
            << fmt(cc::layout_p3(s, layout, a.tau)) << ',' << fmt(frac(ev.view_disjoint_iou))
            << ',' << fmt(cc::binomial_half_width(ev.view_disjoint_iou, ev.n_samples)) << ','
            << cc::to_csv_row(ev) << '\n';
    }
    write_text(a.out, csv.str(), echo);
    return 0;
}

struct OptimizeArgs {
    double image_side = 2.0, trigger_side = 1.0, tau = 0.05;
    std::vector<double> gaps, heights, offsets_x, offsets_y;
    std::string objective = "product";
    std::uint64_t samples = 200'000;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    std::string out;
};

int run_optimize(const OptimizeArgs& a, const std::vector<std::string>& echo) {
    cc::SearchSpace space;
    space.r_l = a.image_side;
    space.e_l = a.trigger_side;
    space.tau = a.tau;
    space.objective = cc::objective_from_string(a.objective);
    space.mc_samples = a.samples;
    space.seed = a.seed;
    if (!a.gaps.empty()) space.gaps = a.gaps;
    if (!a.heights.empty()) space.canvas_heights = a.heights;
    if (!a.offsets_x.empty()) space.trigger_offsets_x = a.offsets_x;
    if (!a.offsets_y.empty()) space.trigger_offsets_y = a.offsets_y;

    const cc::SearchResult result = cc::grid_search(space, resolve_threads(a.threads));
    write_text(a.out, cc::search_result_csv(result), echo);
    return 0;
}

struct VerifyArgs {
    double image_side = 2.0, trigger_side = 1.0;
    std::vector<double> offsets, gaps, heights;
    std::uint64_t samples = 1'000'000;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    std::string out_dir = ".";
};

int run_verify(const VerifyArgs& a, const std::vector<std::string>& echo) {
    const double r = a.image_side, e = a.trigger_side;
    std::vector<double> offsets = a.offsets;
    if (offsets.empty()) offsets = {0.0, -0.1 * r, 0.1 * r, -0.2 * r, 0.2 * r};
    std::vector<double> gaps = a.gaps;
    if (gaps.empty()) gaps = {0.0, 0.25 * e, 0.5 * e, e, 2.0 * e};
    std::vector<double> heights = a.heights;
    if (heights.empty()) heights = {r, 1.25 * r, 1.5 * r};
    const unsigned threads = resolve_threads(a.threads);

    const auto t1 = cc::verify_theorem1(r, e, offsets, a.samples, a.seed, threads);
    const auto t2 = cc::verify_theorem2(r, e, gaps, heights, a.samples, a.seed, threads);
    const auto sym = cc::verify_symmetry(r, e, a.samples, a.seed, threads);

    namespace fs = std::filesystem;
    fs::create_directories(a.out_dir);
    write_text((fs::path(a.out_dir) / "theorem1.csv").string(), cc::theorem1_csv(t1), echo);
    write_text((fs::path(a.out_dir) / "theorem2.csv").string(), cc::theorem2_csv(t2), echo);

    std::cout << cc::text_summary(t1) << cc::text_summary(t2) << cc::text_summary(sym);
    const bool pass = t1.pass && t2.pass && sym.pass;
    std::cout << (pass ? "verification: all checks pass\n" : "verification: FAILURES above\n");
    return pass ? 0 : 1;
}

struct DecomposeArgs {
    std::string vectors, out;
};

int run_decompose(const DecomposeArgs& a, const std::vector<std::string>& echo) {
    std::ifstream in(a.vectors);
    if (!in) throw cc::IoError("cannot open vectors file: " + a.vectors);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ls(line);
        std::vector<double> row;
        double v;
        while (ls >> v) row.push_back(v);
        if (!row.empty()) rows.push_back(std::move(row));
    }
    if (rows.empty() || rows.size() % 2 != 0)
        throw std::invalid_argument("vectors file must hold pairs of lines: u then v");

    std::ostringstream csv;
    csv << "pair,dim,alpha,v_perp_norm,cos_sim,loss,dloss_dalpha,dloss_dvperp_sq\n";
    for (std::size_t i = 0; i < rows.size(); i += 2) {
        const cc::FeaturePair pair{rows[i], rows[i + 1]};
        const cc::Decomposition d = cc::decompose(pair);
        double perp_sq = 0.0;
        for (double x : d.v_perp) perp_sq += x * x;
        const cc::LossGradients g = cc::loss_gradients(d.alpha, perp_sq);
        csv << (i / 2) << ',' << pair.u.size() << ',' << fmt(d.alpha) << ','
            << fmt(std::sqrt(perp_sq)) << ',' << fmt(d.cos_sim) << ',' << fmt(d.loss) << ','
            << fmt(g.d_alpha) << ',' << fmt(g.d_perp_sq) << '\n';
    }
    write_text(a.out, csv.str(), echo);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"composite-poison crafting and crop-geometry verification toolkit"};
    app.set_version_flag("--version", cc::kVersion);
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "flat key=value config file");

    CraftArgs craft_args;
    CLI::App* craft = app.add_subcommand("craft", "craft a poisoned composite dataset");
    craft->add_option("--ref-dir", craft_args.ref_dir, "directory of reference images")->required();
    craft->add_option("--shadow-dir", craft_args.shadow_dir, "directory of shadow images")->required();
    craft->add_option("--trigger", craft_args.trigger, "trigger image file")->required();
    craft->add_option("--out", craft_args.out, "output directory")->required();
    craft->add_option("--count", craft_args.count, "number of poisons")->required();
    craft->add_option("--image-side", craft_args.image_side, "reference/shadow side after resize")
        ->default_val(224);
    craft->add_option("--trigger-side", craft_args.trigger_side, "trigger side after resize")
        ->default_val(50);
    craft->add_option("--alpha", craft_args.alpha, "trigger blend fraction")->default_val(1.0);
    craft->add_option("--seed", craft_args.seed, "RNG seed")->default_val(0);
    craft->add_option("--threads", craft_args.threads, "worker threads (0 = NA_THREADS or 1)")
        ->default_val(0);
    craft->add_option("--layouts", craft_args.layouts,
                      "layout directions to sample (lr rl ud du); default all four");

    AnalyzeArgs an;
    CLI::App* analyze = app.add_subcommand(
        "analyze", "analytic vs Monte Carlo crop probabilities over an s grid (CSV)");
    analyze->add_option("--image-side", an.image_side, "reference/shadow side r_l")->default_val(2.0);
    analyze->add_option("--trigger-side", an.trigger_side, "trigger side e_l")->default_val(1.0);
    analyze->add_option("--gap", an.gap, "gap between reference and shadow")->default_val(0.0);
    analyze->add_option("--canvas-h", an.canvas_h, "canvas height (0 = r_l)")->default_val(0.0);
    analyze->add_option("--tau", an.tau, "IOU threshold")->default_val(0.05);
    analyze->add_option("--samples", an.samples, "Monte Carlo pairs per grid point")
        ->default_val(1'000'000);
    analyze->add_option("--points", an.points, "s-grid size")->default_val(20);
    analyze->add_option("--seed", an.seed, "RNG seed")->default_val(0);
    analyze->add_option("--threads", an.threads, "worker threads")->default_val(0);
    analyze->add_option("--direction", an.direction, "layout direction")->default_val("lr");
    analyze->add_option("--out", an.out, "output CSV (default stdout)");

    OptimizeArgs op;
    CLI::App* optimize = app.add_subcommand("optimize", "grid search over layouts (ranked CSV)");
    optimize->add_option("--image-side", op.image_side, "reference/shadow side r_l")->default_val(2.0);
    optimize->add_option("--trigger-side", op.trigger_side, "trigger side e_l")->default_val(1.0);
    optimize->add_option("--objective", op.objective, "product | mc")->default_val("product");
    optimize->add_option("--tau", op.tau, "IOU threshold")->default_val(0.05);
    optimize->add_option("--gaps", op.gaps, "gap grid");
    optimize->add_option("--heights", op.heights, "canvas height grid");
    optimize->add_option("--offsets-x", op.offsets_x, "trigger x-offset grid");
    optimize->add_option("--offsets-y", op.offsets_y, "trigger y-offset grid");
    optimize->add_option("--samples", op.samples, "MC pairs per grid point")->default_val(200'000);
    optimize->add_option("--seed", op.seed, "RNG seed")->default_val(0);
    optimize->add_option("--threads", op.threads, "worker threads")->default_val(0);
    optimize->add_option("--out", op.out, "output CSV (default stdout)");

    VerifyArgs ve;
    CLI::App* verify = app.add_subcommand(
        "verify", "layout-optimality and symmetry checks (reports + CSVs)");
    verify->add_option("--image-side", ve.image_side, "reference/shadow side r_l")->default_val(2.0);
    verify->add_option("--trigger-side", ve.trigger_side, "trigger side e_l")->default_val(1.0);
    verify->add_option("--offsets", ve.offsets, "trigger offsets (must include 0)");
    verify->add_option("--gaps", ve.gaps, "gaps (must include 0)");
    verify->add_option("--heights", ve.heights, "canvas heights (must include r_l)");
    verify->add_option("--samples", ve.samples, "MC pairs per estimate")->default_val(1'000'000);
    verify->add_option("--seed", ve.seed, "RNG seed")->default_val(0);
    verify->add_option("--threads", ve.threads, "worker threads")->default_val(0);
    verify->add_option("--out-dir", ve.out_dir, "directory for report CSVs")->default_val(".");

    DecomposeArgs de;
    CLI::App* decompose = app.add_subcommand(
        "decompose", "feature decomposition and loss-gradient table from a vectors file");
    decompose->add_option("--vectors", de.vectors, "text file with alternating u/v lines")
        ->required();
    decompose->add_option("--out", de.out, "output CSV (default stdout)");

    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        args = apply_config(args, app);
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;  // usage error
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }

    try {
        if (craft->parsed()) return run_craft(craft_args, config_echo(*craft));
        if (analyze->parsed()) return run_analyze(an, config_echo(*analyze));
        if (optimize->parsed()) return run_optimize(op, config_echo(*optimize));
        if (verify->parsed()) return run_verify(ve, config_echo(*verify));
        if (decompose->parsed()) return run_decompose(de, config_echo(*decompose));
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
