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

#include "cropcraft/geometry.hpp"

#include <map>
#include <sstream>
#include <stdexcept>

namespace cropcraft {

std::string to_string(Direction d) {
    switch (d) {
        case Direction::LeftRight: return "left-right";
        case Direction::RightLeft: return "right-left";
        case Direction::UpDown: return "up-down";
        case Direction::DownUp: return "down-up";
    }
    return "left-right";
}

Direction direction_from_string(std::string_view s) {
    if (s == "left-right" || s == "lr") return Direction::LeftRight;
    if (s == "right-left" || s == "rl") return Direction::RightLeft;
    if (s == "up-down" || s == "ud") return Direction::UpDown;
    if (s == "down-up" || s == "du") return Direction::DownUp;
    throw std::invalid_argument("unknown layout direction: " + std::string(s));
}

std::string to_string(ViewPairClass c) {
    switch (c) {
        case ViewPairClass::MissingInformation: return "missing-information";
        case ViewPairClass::SweetSpot: return "sweet-spot";
        case ViewPairClass::InformationLeak: return "information-leak";
        case ViewPairClass::Other: return "other";
    }
    return "other";
}

namespace {

template <typename T>
void validate_impl(const BasicLayout<T>& layout) {
    auto fail = [](const char* msg) { throw std::invalid_argument(std::string("layout: ") + msg); };

    const BasicRect<T> canvas{T{0}, T{0}, layout.canvas_w, layout.canvas_h};
    if (layout.canvas_w <= T{0} || layout.canvas_h <= T{0}) fail("canvas sides must be positive");
    for (const auto* r : {&layout.reference, &layout.shadow, &layout.trigger}) {
        if (r->w <= T{0} || r->h <= T{0}) fail("rect sides must be positive");
        if (r->x < T{0} || r->y < T{0}) fail("rect origin must be non-negative");
        if (!contains(canvas, *r)) fail("rect exceeds the canvas");
    }
    if (layout.reference.w != layout.reference.h) fail("reference must be square");
    if (layout.shadow.w != layout.shadow.h) fail("shadow must be square");
    if (layout.trigger.w != layout.trigger.h) fail("trigger must be square");
    if (layout.reference.w != layout.shadow.w) fail("reference and shadow must be congruent");
    if (!(layout.trigger.w < layout.shadow.w)) fail("trigger must be smaller than the shadow");
    if (!contains(layout.shadow, layout.trigger)) fail("trigger must lie inside the shadow");
    if (!disjoint(layout.reference, layout.shadow)) fail("reference and shadow must be disjoint");
}

}  // namespace

void validate(const LayoutSpec& layout) { validate_impl(layout); }
void validate(const LayoutF& layout) { validate_impl(layout); }

LayoutF to_continuous(const LayoutSpec& s) {
    auto rect = [](const Rect& r) {
        return RectF{static_cast<double>(r.x), static_cast<double>(r.y),
                     static_cast<double>(r.w), static_cast<double>(r.h)};
    };
    return LayoutF{static_cast<double>(s.canvas_w), static_cast<double>(s.canvas_h),
                   rect(s.reference), rect(s.shadow), rect(s.trigger), s.direction};
}

template <typename T>
BasicLayout<T> transform_layout(const BasicLayout<T>& layout, Transform op) {
    BasicLayout<T> out;
    const bool swaps = op == Transform::Rot90 || op == Transform::Rot270;
    out.canvas_w = swaps ? layout.canvas_h : layout.canvas_w;
    out.canvas_h = swaps ? layout.canvas_w : layout.canvas_h;
    out.reference = transform_rect(layout.reference, op, layout.canvas_w, layout.canvas_h);
    out.shadow = transform_rect(layout.shadow, op, layout.canvas_w, layout.canvas_h);
    out.trigger = transform_rect(layout.trigger, op, layout.canvas_w, layout.canvas_h);
    // Reference relative to shadow decides the direction.
    if (out.reference.x < out.shadow.x) out.direction = Direction::LeftRight;
    else if (out.reference.x > out.shadow.x) out.direction = Direction::RightLeft;
    else if (out.reference.y < out.shadow.y) out.direction = Direction::UpDown;
    else out.direction = Direction::DownUp;
    return out;
}

template BasicLayout<int> transform_layout(const BasicLayout<int>&, Transform);
template BasicLayout<double> transform_layout(const BasicLayout<double>&, Transform);

namespace {

// The transform that carries the canonical left-right layout into each
// direction. Rot90 (clockwise) sends the left half to the top half.
Transform direction_transform(Direction d) {
    switch (d) {
        case Direction::RightLeft: return Transform::FlipH;
        case Direction::UpDown: return Transform::Rot90;
        case Direction::DownUp: return Transform::Rot270;
        case Direction::LeftRight: break;
    }
    return Transform::FlipH;  // unused
}

template <typename T>
BasicLayout<T> optimal_left_right(T r_l, T e_l, T center_off) {
    BasicLayout<T> layout;
    layout.canvas_w = 2 * r_l;
    layout.canvas_h = r_l;
    layout.reference = {T{0}, T{0}, r_l, r_l};
    layout.shadow = {r_l, T{0}, r_l, r_l};
    layout.trigger = {static_cast<T>(r_l + center_off), center_off, e_l, e_l};
    layout.direction = Direction::LeftRight;
    return layout;
}

template <typename T>
BasicLayout<T> make_optimal_impl(Direction direction, T r_l, T e_l, T center_off) {
    if (!(e_l > T{0} && e_l < r_l))
        throw std::invalid_argument("make_optimal_layout: need 0 < e_l < r_l");
    BasicLayout<T> lr = optimal_left_right(r_l, e_l, center_off);
    if (direction == Direction::LeftRight) return lr;
    return transform_layout(lr, direction_transform(direction));
}

}  // namespace

LayoutSpec make_optimal_layout(Direction direction, int r_l, int e_l) {
    return make_optimal_impl<int>(direction, r_l, e_l, (r_l - e_l) / 2);
}

LayoutF make_optimal_layout_f(Direction direction, double r_l, double e_l) {
    return make_optimal_impl<double>(direction, r_l, e_l, (r_l - e_l) / 2.0);
}

LayoutF make_layout_f(Direction direction, double r_l, double e_l, double gap, double canvas_h,
                      double trig_off_x, double trig_off_y) {
    if (!(e_l > 0.0 && e_l < r_l)) throw std::invalid_argument("make_layout_f: need 0 < e_l < r_l");
    if (gap < 0.0) throw std::invalid_argument("make_layout_f: gap must be >= 0");
    if (canvas_h < r_l) throw std::invalid_argument("make_layout_f: canvas_h must be >= r_l");

    LayoutF layout;
    layout.canvas_w = 2.0 * r_l + gap;
    layout.canvas_h = canvas_h;
    layout.reference = {0.0, 0.0, r_l, r_l};
    layout.shadow = {r_l + gap, 0.0, r_l, r_l};
    const double c = (r_l - e_l) / 2.0;
    layout.trigger = {layout.shadow.x + c + trig_off_x, c + trig_off_y, e_l, e_l};
    layout.direction = Direction::LeftRight;
    validate(layout);  // rejects offsets that push the trigger outside the shadow
    if (direction == Direction::LeftRight) return layout;
    return transform_layout(layout, direction_transform(direction));
}

namespace {

template <typename T>
ViewPairClass classify_impl(const BasicRect<T>& v1, const BasicRect<T>& v2,
                            const BasicLayout<T>& layout) {
    const BasicRect<T> canvas{T{0}, T{0}, layout.canvas_w, layout.canvas_h};
    if (!contains(canvas, v1) || !contains(canvas, v2))
        throw std::invalid_argument("classify_view_pair: views must lie within the canvas");

    const auto& trig = layout.trigger;
    const auto& ref = layout.reference;
    const bool v1_trig = !disjoint(v1, trig), v1_ref = !disjoint(v1, ref);
    const bool v2_trig = !disjoint(v2, trig), v2_ref = !disjoint(v2, ref);

    if (!v1_trig && !v1_ref && !v2_trig && !v2_ref) return ViewPairClass::MissingInformation;
    if (contains(v1, trig) && !v1_ref && contains(ref, v2)) return ViewPairClass::SweetSpot;
    if (v1_trig && v1_ref && v2_trig && v2_ref) return ViewPairClass::InformationLeak;
    return ViewPairClass::Other;
}

}  // namespace

ViewPairClass classify_view_pair(const RectF& v1, const RectF& v2, const LayoutF& layout) {
    return classify_impl(v1, v2, layout);
}

ViewPairClass classify_view_pair(const Rect& v1, const Rect& v2, const LayoutSpec& layout) {
    return classify_impl(v1, v2, layout);
}

std::string serialize(const LayoutSpec& layout) {
    std::ostringstream os;
    os << "canvas_w=" << layout.canvas_w << " canvas_h=" << layout.canvas_h
       << " ref_x=" << layout.reference.x << " ref_y=" << layout.reference.y
       << " shadow_x=" << layout.shadow.x << " shadow_y=" << layout.shadow.y
       << " trig_x=" << layout.trigger.x << " trig_y=" << layout.trigger.y
       << " side_r=" << layout.reference.w << " side_e=" << layout.trigger.w
       << " direction=" << to_string(layout.direction);
    return os.str();
}

LayoutSpec parse_layout_spec(std::string_view text) {
    std::map<std::string, std::string> kv;
    std::istringstream is{std::string(text)};
    std::string tok;
    while (is >> tok) {
        auto eq = tok.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("layout record: expected key=value, got '" + tok + "'");
        kv[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    auto geti = [&](const char* key) {
        auto it = kv.find(key);
        if (it == kv.end())
            throw std::invalid_argument(std::string("layout record: missing key ") + key);
        return std::stoi(it->second);
    };
    auto it = kv.find("direction");
    if (it == kv.end()) throw std::invalid_argument("layout record: missing key direction");

    LayoutSpec layout;
    layout.canvas_w = geti("canvas_w");
    layout.canvas_h = geti("canvas_h");
    const int side_r = geti("side_r");
    const int side_e = geti("side_e");
    layout.reference = {geti("ref_x"), geti("ref_y"), side_r, side_r};
    layout.shadow = {geti("shadow_x"), geti("shadow_y"), side_r, side_r};
    layout.trigger = {geti("trig_x"), geti("trig_y"), side_e, side_e};
    layout.direction = direction_from_string(it->second);
    validate(layout);
    return layout;
}

}  // namespace cropcraft
