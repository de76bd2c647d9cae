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

#include <array>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <vector>

#include "cropcraft/geometry.hpp"

namespace cropcraft {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DecodeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Owned row-major RGB8 buffer. All pixel operations are pure value
/// functions, so images can be shared freely across threads.
struct RasterImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;  // width * height * 3 bytes

    static RasterImage filled(int w, int h, std::array<std::uint8_t, 3> rgb);

    std::uint8_t* at(int x, int y) { return pixels.data() + 3 * (static_cast<std::size_t>(y) * width + x); }
    const std::uint8_t* at(int x, int y) const {
        return pixels.data() + 3 * (static_cast<std::size_t>(y) * width + x);
    }

    bool operator==(const RasterImage&) const = default;
};

/// Decodes a PNG or JPEG file (sniffed by magic bytes) to RGB8. Alpha is
/// dropped, grayscale and palette images are expanded.
RasterImage load_image(const std::filesystem::path& path);

/// Writes a PNG (output is always PNG; the composites must stay lossless).
void save_image(const RasterImage& img, const std::filesystem::path& path);

/// Bilinear resize with edge clamping; same-size resize is the identity.
RasterImage resize(const RasterImage& img, int w, int h);

/// Alpha-blends patch over base at (x, y): alpha*patch + (1-alpha)*base,
/// rounded half away from zero per channel. The patch must fit inside base.
RasterImage paste(const RasterImage& base, const RasterImage& patch, int x, int y, double alpha);

RasterImage transform(const RasterImage& img, Transform op);

/// Copies the given rect (must lie inside the image).
RasterImage crop(const RasterImage& img, const Rect& r);

}  // namespace cropcraft
