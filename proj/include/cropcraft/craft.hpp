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
#include <filesystem>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "cropcraft/geometry.hpp"
#include "cropcraft/raster.hpp"

namespace cropcraft {

/// Everything needed to produce one poisoned dataset deterministically.
struct PoisonRecipe {
    std::filesystem::path reference_dir;
    std::filesystem::path shadow_dir;
    std::filesystem::path trigger_path;
    std::filesystem::path output_dir;
    int trigger_side = 50;  // e_l after resize
    int image_side = 224;   // r_l after resize
    int count = 0;
    std::vector<Direction> layouts = {Direction::LeftRight, Direction::RightLeft,
                                      Direction::UpDown, Direction::DownUp};
    double alpha = 1.0;  // trigger blend fraction
    std::uint64_t seed = 0;

    void validate() const;
};

struct PoisonRecord {
    std::string filename;          // poison_{index:06}.png
    std::string reference_source;  // filename within reference_dir
    std::string shadow_source;     // filename within shadow_dir
    std::uint64_t item_seed = 0;
    LayoutSpec layout;

    bool operator==(const PoisonRecord&) const = default;
};

struct PoisonManifest {
    std::string tool_version;
    std::uint64_t recipe_hash = 0;
    std::vector<PoisonRecord> records;

    bool operator==(const PoisonManifest&) const = default;
};

/// Stable 64-bit hash of the recipe's canonical serialization.
std::uint64_t recipe_hash(const PoisonRecipe& recipe);

/// Blends the trigger into the shadow at the floor-centered position
/// ((r_l - e_l)/2, (r_l - e_l)/2). Both images must already be at their
/// recipe sizes.
RasterImage embed_trigger(const RasterImage& shadow, const RasterImage& trigger,
                          const PoisonRecipe& recipe);

/// Builds the zero-gap composite for the direction and reports the placement.
/// trigger_side is recorded in the returned LayoutSpec (the trigger pixels
/// already live inside infected_shadow).
std::pair<RasterImage, LayoutSpec> compose(const RasterImage& reference,
                                           const RasterImage& infected_shadow,
                                           Direction direction, int trigger_side);

/// Runs the full crafting pipeline: per item, derive a seed, sample source
/// images and a direction, resize, embed, compose and save PNG; then writes
/// `manifest.txt` into the output directory. Partially written outputs are
/// removed if crafting fails. `config_echo` lines (if any) are embedded as
/// manifest comments; `progress(done, total)` is invoked after each item
/// (from worker threads, serialized).
PoisonManifest craft_dataset(const PoisonRecipe& recipe, unsigned threads = 1,
                             const std::vector<std::string>& config_echo = {},
                             const std::function<void(int, int)>& progress = {});

std::string serialize(const PoisonManifest& manifest,
                      const std::vector<std::string>& comments = {});
PoisonManifest parse_manifest(const std::string& text);

void save_manifest(const PoisonManifest& manifest, const std::filesystem::path& path,
                   const std::vector<std::string>& comments = {});
PoisonManifest load_manifest(const std::filesystem::path& path);

}  // namespace cropcraft
