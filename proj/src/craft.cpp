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

#include "cropcraft/craft.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "cropcraft/rng.hpp"
#include "cropcraft/version.hpp"

namespace cropcraft {

void PoisonRecipe::validate() const {
    if (count < 1) throw std::invalid_argument("recipe: count must be >= 1");
    if (!(trigger_side > 0 && trigger_side < image_side))
        throw std::invalid_argument("recipe: need 0 < trigger_side < image_side");
    if (layouts.empty()) throw std::invalid_argument("recipe: layouts must be non-empty");
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw std::invalid_argument("recipe: alpha must be in [0, 1]");
}

namespace {

std::uint64_t fnv1a(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string canonical_recipe(const PoisonRecipe& r) {
    std::ostringstream os;
    os << "ref=" << r.reference_dir.string() << ";shadow=" << r.shadow_dir.string()
       << ";trigger=" << r.trigger_path.string() << ";e=" << r.trigger_side
       << ";r=" << r.image_side << ";count=" << r.count << ";alpha=" << r.alpha
       << ";seed=" << r.seed << ";layouts=";
    for (Direction d : r.layouts) os << to_string(d) << ',';
    return os.str();
}

std::vector<std::string> list_images(const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
    std::vector<std::string> names;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        std::string ext = entry.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        if (ext == ".png" || ext == ".jpg" || ext == ".jpeg")
            names.push_back(entry.path().filename().string());
    }
    if (names.empty()) throw IoError("no PNG/JPEG images in " + dir.string());
    std::sort(names.begin(), names.end());  // stable sampling order
    return names;
}

std::string poison_name(int index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "poison_%06d.png", index);
    return buf;
}

}  // namespace

std::uint64_t recipe_hash(const PoisonRecipe& recipe) { return fnv1a(canonical_recipe(recipe)); }

RasterImage embed_trigger(const RasterImage& shadow, const RasterImage& trigger,
                          const PoisonRecipe& recipe) {
    if (shadow.width != recipe.image_side || shadow.height != recipe.image_side)
        throw std::invalid_argument("embed_trigger: shadow is not image_side square");
    if (trigger.width != recipe.trigger_side || trigger.height != recipe.trigger_side)
        throw std::invalid_argument("embed_trigger: trigger is not trigger_side square");
    const int off = (recipe.image_side - recipe.trigger_side) / 2;
    return paste(shadow, trigger, off, off, recipe.alpha);
}

std::pair<RasterImage, LayoutSpec> compose(const RasterImage& reference,
                                           const RasterImage& infected_shadow,
                                           Direction direction, int trigger_side) {
    if (reference.width != reference.height || infected_shadow.width != infected_shadow.height ||
        reference.width != infected_shadow.width)
        throw std::invalid_argument("compose: inputs must be congruent squares");
    const int r_l = reference.width;
    if (!(trigger_side > 0 && trigger_side < r_l))
        throw std::invalid_argument("compose: need 0 < trigger_side < image side");

    LayoutSpec layout = make_optimal_layout(direction, r_l, trigger_side);
    // Record the trigger where embed_trigger actually put it: shadow origin
    // plus the floor-centered offset. This differs from the rigid-transform
    // image only when r_l - e_l is odd.
    const int off = (r_l - trigger_side) / 2;
    layout.trigger = {layout.shadow.x + off, layout.shadow.y + off, trigger_side, trigger_side};
    validate(layout);

    RasterImage canvas = RasterImage::filled(layout.canvas_w, layout.canvas_h, {0, 0, 0});
    canvas = paste(canvas, reference, layout.reference.x, layout.reference.y, 1.0);
    canvas = paste(canvas, infected_shadow, layout.shadow.x, layout.shadow.y, 1.0);
    return {std::move(canvas), layout};
}

namespace {

struct SourcePools {
    std::vector<std::string> refs, shadows;
    std::filesystem::path ref_dir, shadow_dir;
    RasterImage trigger;
    int image_side = 0;
};

// Loads and square-resizes a source image, memoizing by filename.
class ResizedCache {
  public:
    ResizedCache(std::filesystem::path dir, int side) : dir_(std::move(dir)), side_(side) {}

    const RasterImage& get(const std::string& name) {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = cache_.find(name);
        if (it != cache_.end()) return it->second;
        RasterImage img = resize(load_image(dir_ / name), side_, side_);
        return cache_.emplace(name, std::move(img)).first->second;
    }

  private:
    std::filesystem::path dir_;
    int side_;
    std::mutex mutex_;
    std::unordered_map<std::string, RasterImage> cache_;
};

}  // namespace

PoisonManifest craft_dataset(const PoisonRecipe& recipe, unsigned threads,
                             const std::vector<std::string>& config_echo,
                             const std::function<void(int, int)>& progress) {
    namespace fs = std::filesystem;
    recipe.validate();

    SourcePools pools;
    pools.refs = list_images(recipe.reference_dir);
    pools.shadows = list_images(recipe.shadow_dir);
    pools.trigger = resize(load_image(recipe.trigger_path), recipe.trigger_side, recipe.trigger_side);

    fs::create_directories(recipe.output_dir);

    PoisonManifest manifest;
    manifest.tool_version = kVersion;
    manifest.recipe_hash = recipe_hash(recipe);
    manifest.records.resize(recipe.count);

    ResizedCache ref_cache(recipe.reference_dir, recipe.image_side);
    ResizedCache shadow_cache(recipe.shadow_dir, recipe.image_side);

    std::vector<fs::path> written(recipe.count);
    std::mutex progress_mutex;
    int done = 0;
    auto craft_item = [&](int i) {
        Philox gen(recipe.seed, static_cast<std::uint64_t>(i));
        PoisonRecord rec;
        rec.item_seed = gen.next_u64();
        rec.filename = poison_name(i);
        rec.reference_source = pools.refs[gen.next_below(pools.refs.size())];
        rec.shadow_source = pools.shadows[gen.next_below(pools.shadows.size())];
        const Direction dir = recipe.layouts[gen.next_below(recipe.layouts.size())];

        const RasterImage& reference = ref_cache.get(rec.reference_source);
        const RasterImage& shadow = shadow_cache.get(rec.shadow_source);
        const RasterImage infected = embed_trigger(shadow, pools.trigger, recipe);
        auto [composite, layout] = compose(reference, infected, dir, recipe.trigger_side);
        rec.layout = layout;

        const fs::path out = recipe.output_dir / rec.filename;
        save_image(composite, out);
        written[i] = out;
        manifest.records[i] = std::move(rec);
        if (progress) {
            std::lock_guard<std::mutex> lock(progress_mutex);
            progress(++done, recipe.count);
        }
    };

    try {
        if (threads <= 1) {
            for (int i = 0; i < recipe.count; ++i) craft_item(i);
        } else {
            std::vector<std::thread> pool;
            std::exception_ptr failure;
            std::mutex failure_mutex;
            const int per = (recipe.count + static_cast<int>(threads) - 1) / static_cast<int>(threads);
            for (unsigned t = 0; t < threads; ++t) {
                const int begin = static_cast<int>(t) * per;
                const int end = std::min(recipe.count, begin + per);
                pool.emplace_back([&, begin, end] {
                    try {
                        for (int i = begin; i < end; ++i) craft_item(i);
                    } catch (...) {
                        std::lock_guard<std::mutex> lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                    }
                });
            }
            for (auto& th : pool) th.join();
            if (failure) std::rethrow_exception(failure);
        }
        save_manifest(manifest, recipe.output_dir / "manifest.txt", config_echo);
    } catch (...) {
        // Partial-write cleanup: remove whatever this run managed to emit.
        std::error_code ec;
        for (const auto& p : written)
            if (!p.empty()) fs::remove(p, ec);
        fs::remove(recipe.output_dir / "manifest.txt", ec);
        throw;
    }
    return manifest;
}

std::string serialize(const PoisonManifest& manifest, const std::vector<std::string>& comments) {
    std::ostringstream os;
    char hash[20];
    std::snprintf(hash, sizeof hash, "%016llx",
                  static_cast<unsigned long long>(manifest.recipe_hash));
    os << "# cropcraft-manifest v1\ttool=" << manifest.tool_version << "\trecipe_hash=" << hash
       << "\tcount=" << manifest.records.size() << '\n';
    for (const auto& c : comments) os << "# " << c << '\n';
    for (const auto& r : manifest.records) {
        std::string layout_kv = cropcraft::serialize(r.layout);
        std::replace(layout_kv.begin(), layout_kv.end(), ' ', '\t');
        char seed[20];
        std::snprintf(seed, sizeof seed, "%016llx", static_cast<unsigned long long>(r.item_seed));
        os << "file=" << r.filename << "\tref=" << r.reference_source
           << "\tshadow=" << r.shadow_source << "\titem_seed=" << seed << '\t' << layout_kv
           << '\n';
    }
    return os.str();
}

PoisonManifest parse_manifest(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line) || line.rfind("# cropcraft-manifest v1", 0) != 0)
        throw std::invalid_argument("manifest: missing header line");

    PoisonManifest manifest;
    std::size_t declared = 0;
    {
        std::istringstream hs(line.substr(1));
        std::string tok;
        while (hs >> tok) {
            if (tok.rfind("tool=", 0) == 0) manifest.tool_version = tok.substr(5);
            else if (tok.rfind("recipe_hash=", 0) == 0)
                manifest.recipe_hash = std::stoull(tok.substr(12), nullptr, 16);
            else if (tok.rfind("count=", 0) == 0) declared = std::stoull(tok.substr(6));
        }
    }

    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::map<std::string, std::string> kv;
        std::istringstream ls(line);
        std::string field;
        std::string layout_kv;
        while (std::getline(ls, field, '\t')) {
            const auto eq = field.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("manifest: bad field '" + field + "'");
            const std::string key = field.substr(0, eq);
            if (key == "file" || key == "ref" || key == "shadow" || key == "item_seed")
                kv[key] = field.substr(eq + 1);
            else
                layout_kv += field + ' ';
        }
        for (const char* key : {"file", "ref", "shadow", "item_seed"})
            if (!kv.count(key))
                throw std::invalid_argument(std::string("manifest: record missing ") + key);
        PoisonRecord rec;
        rec.filename = kv["file"];
        rec.reference_source = kv["ref"];
        rec.shadow_source = kv["shadow"];
        rec.item_seed = std::stoull(kv["item_seed"], nullptr, 16);
        rec.layout = parse_layout_spec(layout_kv);
        manifest.records.push_back(std::move(rec));
    }
    if (declared != manifest.records.size())
        throw std::invalid_argument("manifest: header count does not match records");
    std::set<std::string> seen;
    for (const auto& rec : manifest.records)
        if (!seen.insert(rec.filename).second)
            throw std::invalid_argument("manifest: duplicate filename " + rec.filename);
    return manifest;
}

void save_manifest(const PoisonManifest& manifest, const std::filesystem::path& path,
                   const std::vector<std::string>& comments) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << serialize(manifest, comments);
    if (!out) throw IoError("write failed: " + path.string());
}

PoisonManifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_manifest(ss.str());
}

}  // namespace cropcraft
