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

#include "cropcraft/raster.hpp"

#include <algorithm>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>

#include <jpeglib.h>
#include <png.h>

namespace cropcraft {

RasterImage RasterImage::filled(int w, int h, std::array<std::uint8_t, 3> rgb) {
    if (w <= 0 || h <= 0) throw std::invalid_argument("image sides must be positive");
    RasterImage img;
    img.width = w;
    img.height = h;
    img.pixels.resize(static_cast<std::size_t>(w) * h * 3);
    for (std::size_t i = 0; i < img.pixels.size(); i += 3) {
        img.pixels[i] = rgb[0];
        img.pixels[i + 1] = rgb[1];
        img.pixels[i + 2] = rgb[2];
    }
    return img;
}

namespace {

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<std::uint8_t> data{std::istreambuf_iterator<char>(in),
                                   std::istreambuf_iterator<char>()};
    if (in.bad()) throw IoError("read failed: " + path.string());
    return data;
}

RasterImage decode_png(const std::vector<std::uint8_t>& data, const std::string& name) {
    png_image im{};
    im.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_memory(&im, data.data(), data.size()))
        throw DecodeError("png: " + name + ": " + im.message);
    im.format = PNG_FORMAT_RGB;

    RasterImage img;
    img.width = static_cast<int>(im.width);
    img.height = static_cast<int>(im.height);
    img.pixels.resize(PNG_IMAGE_SIZE(im));
    if (!png_image_finish_read(&im, nullptr, img.pixels.data(), 0, nullptr)) {
        std::string msg = im.message;
        png_image_free(&im);
        throw DecodeError("png: " + name + ": " + msg);
    }
    return img;
}

struct JpegErrorMgr {
    jpeg_error_mgr pub;
    std::jmp_buf jump;
    char message[JMSG_LENGTH_MAX];
};

void jpeg_error_exit(j_common_ptr cinfo) {
    auto* err = reinterpret_cast<JpegErrorMgr*>(cinfo->err);
    (*cinfo->err->format_message)(cinfo, err->message);
    std::longjmp(err->jump, 1);
}

RasterImage decode_jpeg(const std::vector<std::uint8_t>& data, const std::string& name) {
    jpeg_decompress_struct cinfo{};
    JpegErrorMgr err{};
    cinfo.err = jpeg_std_error(&err.pub);
    err.pub.error_exit = jpeg_error_exit;

    RasterImage img;
    if (setjmp(err.jump)) {
        jpeg_destroy_decompress(&cinfo);
        throw DecodeError("jpeg: " + name + ": " + err.message);
    }
    jpeg_create_decompress(&cinfo);
    jpeg_mem_src(&cinfo, data.data(), static_cast<unsigned long>(data.size()));
    jpeg_read_header(&cinfo, TRUE);
    cinfo.out_color_space = JCS_RGB;
    jpeg_start_decompress(&cinfo);

    img.width = static_cast<int>(cinfo.output_width);
    img.height = static_cast<int>(cinfo.output_height);
    img.pixels.resize(static_cast<std::size_t>(img.width) * img.height * 3);
    while (cinfo.output_scanline < cinfo.output_height) {
        JSAMPROW row = img.pixels.data() + static_cast<std::size_t>(cinfo.output_scanline) * img.width * 3;
        jpeg_read_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);
    return img;
}

}  // namespace

RasterImage load_image(const std::filesystem::path& path) {
    const auto data = read_file(path);
    static const std::uint8_t png_magic[8] = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};
    if (data.size() >= 8 && std::memcmp(data.data(), png_magic, 8) == 0)
        return decode_png(data, path.string());
    if (data.size() >= 3 && data[0] == 0xFF && data[1] == 0xD8 && data[2] == 0xFF)
        return decode_jpeg(data, path.string());
    throw DecodeError("unsupported image format: " + path.string());
}

void save_image(const RasterImage& img, const std::filesystem::path& path) {
    if (img.width <= 0 || img.height <= 0 ||
        img.pixels.size() != static_cast<std::size_t>(img.width) * img.height * 3)
        throw std::invalid_argument("save_image: malformed image buffer");

    png_image im{};
    im.version = PNG_IMAGE_VERSION;
    im.width = static_cast<png_uint_32>(img.width);
    im.height = static_cast<png_uint_32>(img.height);
    im.format = PNG_FORMAT_RGB;
    if (!png_image_write_to_file(&im, path.string().c_str(), 0, img.pixels.data(), 0, nullptr))
        throw IoError("png write: " + path.string() + ": " + im.message);
}

RasterImage resize(const RasterImage& img, int w, int h) {
    if (w <= 0 || h <= 0) throw std::invalid_argument("resize: target sides must be positive");
    if (w == img.width && h == img.height) return img;

    RasterImage out;
    out.width = w;
    out.height = h;
    out.pixels.resize(static_cast<std::size_t>(w) * h * 3);

    const double sx = static_cast<double>(img.width) / w;
    const double sy = static_cast<double>(img.height) / h;
    for (int y = 0; y < h; ++y) {
        // Pixel-center mapping; samples outside the source clamp to the edge.
        double fy = (y + 0.5) * sy - 0.5;
        fy = std::clamp(fy, 0.0, static_cast<double>(img.height - 1));
        const int y0 = static_cast<int>(fy);
        const int y1 = std::min(y0 + 1, img.height - 1);
        const double wy = fy - y0;
        for (int x = 0; x < w; ++x) {
            double fx = (x + 0.5) * sx - 0.5;
            fx = std::clamp(fx, 0.0, static_cast<double>(img.width - 1));
            const int x0 = static_cast<int>(fx);
            const int x1 = std::min(x0 + 1, img.width - 1);
            const double wx = fx - x0;
            const std::uint8_t* p00 = img.at(x0, y0);
            const std::uint8_t* p10 = img.at(x1, y0);
            const std::uint8_t* p01 = img.at(x0, y1);
            const std::uint8_t* p11 = img.at(x1, y1);
            std::uint8_t* dst = out.at(x, y);
            for (int c = 0; c < 3; ++c) {
                const double top = p00[c] + wx * (p10[c] - p00[c]);
                const double bot = p01[c] + wx * (p11[c] - p01[c]);
                const double v = top + wy * (bot - top);
                dst[c] = static_cast<std::uint8_t>(std::lround(v));
            }
        }
    }
    return out;
}

RasterImage paste(const RasterImage& base, const RasterImage& patch, int x, int y, double alpha) {
    if (alpha < 0.0 || alpha > 1.0) throw std::invalid_argument("paste: alpha must be in [0, 1]");
    if (x < 0 || y < 0 || x + patch.width > base.width || y + patch.height > base.height)
        throw std::invalid_argument("paste: patch placement out of bounds");

    RasterImage out = base;
    for (int py = 0; py < patch.height; ++py) {
        const std::uint8_t* src = patch.at(0, py);
        std::uint8_t* dst = out.at(x, y + py);
        if (alpha == 1.0) {
            std::memcpy(dst, src, static_cast<std::size_t>(patch.width) * 3);
            continue;
        }
        for (int i = 0; i < patch.width * 3; ++i) {
            const double v = alpha * src[i] + (1.0 - alpha) * dst[i];
            dst[i] = static_cast<std::uint8_t>(std::lround(v));  // half away from zero
        }
    }
    return out;
}

RasterImage transform(const RasterImage& img, Transform op) {
    const int W = img.width, H = img.height;
    const bool swaps = op == Transform::Rot90 || op == Transform::Rot270;
    RasterImage out;
    out.width = swaps ? H : W;
    out.height = swaps ? W : H;
    out.pixels.resize(img.pixels.size());

    for (int y = 0; y < out.height; ++y) {
        for (int x = 0; x < out.width; ++x) {
            int sx = x, sy = y;
            switch (op) {
                case Transform::Rot90: sx = y; sy = H - 1 - x; break;
                case Transform::Rot180: sx = W - 1 - x; sy = H - 1 - y; break;
                case Transform::Rot270: sx = W - 1 - y; sy = x; break;
                case Transform::FlipH: sx = W - 1 - x; break;
                case Transform::FlipV: sy = H - 1 - y; break;
            }
            std::memcpy(out.at(x, y), img.at(sx, sy), 3);
        }
    }
    return out;
}

RasterImage crop(const RasterImage& img, const Rect& r) {
    if (r.w <= 0 || r.h <= 0 || r.x < 0 || r.y < 0 || r.right() > img.width ||
        r.bottom() > img.height)
        throw std::invalid_argument("crop: rect out of bounds");
    RasterImage out;
    out.width = r.w;
    out.height = r.h;
    out.pixels.resize(static_cast<std::size_t>(r.w) * r.h * 3);
    for (int y = 0; y < r.h; ++y)
        std::memcpy(out.at(0, y), img.at(r.x, r.y + y), static_cast<std::size_t>(r.w) * 3);
    return out;
}

}  // namespace cropcraft
