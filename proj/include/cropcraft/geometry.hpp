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

#include <algorithm>
#include <cstdint>
#include <string>
#include <string_view>

namespace cropcraft {

/// Axis-aligned rectangle, top-left origin. T is int for pixel rects
/// (crafting, manifests) and double for the continuous crop geometry.
template <typename T>
struct BasicRect {
    T x{}, y{}, w{}, h{};

    T right() const { return x + w; }
    T bottom() const { return y + h; }
    T area() const { return w * h; }

    bool operator==(const BasicRect&) const = default;
};

using Rect = BasicRect<int>;
using RectF = BasicRect<double>;

template <typename T>
bool contains(const BasicRect<T>& outer, const BasicRect<T>& inner) {
    return inner.x >= outer.x && inner.y >= outer.y && inner.right() <= outer.right() &&
           inner.bottom() <= outer.bottom();
}

template <typename T>
T intersection_area(const BasicRect<T>& a, const BasicRect<T>& b) {
    T w = std::min(a.right(), b.right()) - std::max(a.x, b.x);
    T h = std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y);
    if (w <= T{0} || h <= T{0}) return T{0};
    return w * h;
}

template <typename T>
bool disjoint(const BasicRect<T>& a, const BasicRect<T>& b) {
    return intersection_area(a, b) <= T{0};
}

/// Intersection-over-union; 0 for disjoint rects, 1 for identical ones.
template <typename T>
double iou(const BasicRect<T>& a, const BasicRect<T>& b) {
    double inter = static_cast<double>(intersection_area(a, b));
    double uni = static_cast<double>(a.area()) + static_cast<double>(b.area()) - inter;
    return uni > 0.0 ? inter / uni : 0.0;
}

/// Side of the composite the reference occupies relative to the shadow.
enum class Direction { LeftRight, RightLeft, UpDown, DownUp };

std::string to_string(Direction d);
/// Accepts the long names ("left-right", ...) and the short forms lr/rl/ud/du.
Direction direction_from_string(std::string_view s);

/// Rigid transforms shared by rasters, rects and layouts. Rot90 is clockwise.
enum class Transform { Rot90, Rot180, Rot270, FlipH, FlipV };

/// Image of a rect under a canvas transform. (canvas_w, canvas_h) are the
/// dimensions *before* the transform.
template <typename T>
BasicRect<T> transform_rect(const BasicRect<T>& r, Transform op, T canvas_w, T canvas_h) {
    switch (op) {
        case Transform::Rot90: return {canvas_h - r.y - r.h, r.x, r.h, r.w};
        case Transform::Rot180: return {canvas_w - r.x - r.w, canvas_h - r.y - r.h, r.w, r.h};
        case Transform::Rot270: return {r.y, canvas_w - r.x - r.w, r.h, r.w};
        case Transform::FlipH: return {canvas_w - r.x - r.w, r.y, r.w, r.h};
        case Transform::FlipV: return {r.x, canvas_h - r.y - r.h, r.w, r.h};
    }
    return r;
}

/// Full placement record for one composite: canvas size plus the reference,
/// shadow and trigger rects. The reference and shadow are congruent squares,
/// the trigger is a smaller square inside the shadow, and reference and
/// shadow never overlap.
template <typename T>
struct BasicLayout {
    T canvas_w{}, canvas_h{};
    BasicRect<T> reference, shadow, trigger;
    Direction direction = Direction::LeftRight;

    bool operator==(const BasicLayout&) const = default;
};

/// Integer-pixel layout used at crafting time and in manifests.
using LayoutSpec = BasicLayout<int>;
/// Continuous layout used by the probability/optimization modules.
using LayoutF = BasicLayout<double>;

/// Throws std::invalid_argument if any layout invariant fails.
void validate(const LayoutSpec& layout);
void validate(const LayoutF& layout);

LayoutF to_continuous(const LayoutSpec& layout);

/// The likelihood-maximizing layout: square canvas halves with zero gap and
/// the trigger centered in the shadow half. The left-right form is canvas
/// (2*r_l, r_l) with the reference at (0,0) and the shadow at (r_l,0); other
/// directions are its exact rigid-transform images. Integer centering rounds
/// down when r_l - e_l is odd.
LayoutSpec make_optimal_layout(Direction direction, int r_l, int e_l);
LayoutF make_optimal_layout_f(Direction direction, double r_l, double e_l);

/// General continuous layout builder for searches and theorem checks:
/// gap = separation between reference and shadow along the layout axis,
/// canvas_h = the cross-axis canvas extent (>= r_l), and the trigger is
/// displaced from the shadow center by (trig_off_x, trig_off_y). defined in
/// left-right terms and transformed for the other directions.
LayoutF make_layout_f(Direction direction, double r_l, double e_l, double gap, double canvas_h,
                      double trig_off_x = 0.0, double trig_off_y = 0.0);

template <typename T>
BasicLayout<T> transform_layout(const BasicLayout<T>& layout, Transform op);

/// What a pair of crop views jointly reveals about the trigger and the
/// reference.
enum class ViewPairClass { MissingInformation, SweetSpot, InformationLeak, Other };

std::string to_string(ViewPairClass c);

/// MissingInformation: neither view touches trigger or reference.
/// SweetSpot: v1 contains the trigger and avoids the reference; v2 lies
/// inside the reference. InformationLeak: both views touch both regions.
/// Everything else (including the asymmetric leak cases) is Other.
ViewPairClass classify_view_pair(const RectF& v1, const RectF& v2, const LayoutF& layout);
ViewPairClass classify_view_pair(const Rect& v1, const Rect& v2, const LayoutSpec& layout);

/// Key-value serialization of a pixel layout. Keys: canvas_w canvas_h ref_x
/// ref_y shadow_x shadow_y trig_x trig_y side_r side_e direction.
std::string serialize(const LayoutSpec& layout);
LayoutSpec parse_layout_spec(std::string_view text);

}  // namespace cropcraft
