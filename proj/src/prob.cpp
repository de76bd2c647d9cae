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

#include "cropcraft/prob.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace cropcraft {

void ProbParams::validate() const {
    if (!(e_l > 0.0 && e_l < r_l))
        throw std::invalid_argument("ProbParams: need 0 < e_l < r_l");
    if (g < 0.0) throw std::invalid_argument("ProbParams: gap must be >= 0");
    if (!(tau >= 0.0 && tau < 1.0)) throw std::invalid_argument("ProbParams: need 0 <= tau < 1");
    const double s_max = max_side();
    if (!(s_max > e_l && s_max <= std::min(canvas_w(), canvas_h()) + 1e-12))
        throw std::invalid_argument("ProbParams: need e_l < S <= min(canvas_w, canvas_h)");
}

double p1(double s, const ProbParams& params) {
    const double r = params.r_l, e = params.e_l, g = params.g;
    if (s <= e || s > r) return 0.0;
    const double denom_x = 2.0 * r + g - s;  // canvas_w - s
    if (s <= (r + e) / 2.0) return (s - e) * (s - e) / (denom_x * (r - s));
    return (r - s) / denom_x;  // (r-s)^2 / (denom_x (r-s)), the (r-s) cancels
}

double p2(double s, const ProbParams& params) {
    const double r = params.r_l, g = params.g;
    if (s <= 0.0 || s > r) return 0.0;
    return (r - s) / (2.0 * r + g - s);
}

double p3(double s, const ProbParams& params) {
    return crop_disjoint_prob(s, params.canvas_w(), params.canvas_h(), params.tau);
}

namespace {

// CDF of |U1 - U2|, U1, U2 ~ Uniform[0, L], at d >= 0. L == 0 degenerates to
// a point mass at 0.
double diff_cdf(double d, double L) {
    if (d < 0.0) return 0.0;
    if (L <= 0.0 || d >= L) return 1.0;
    return d * (2.0 * L - d) / (L * L);
}

// Mass of the overlap-width density on [a, b] c (s - L, s):
// f(w) = 2 (L - s + w) / L^2.
double overlap_density_mass(double a, double b, double s, double L) {
    return (2.0 * (L - s) * (b - a) + (b * b - a * a)) / (L * L);
}

// Integral over [a, b], a > 0, of k0 + k1 w + km1 / w + km2 / w^2.
double rational_integral(double a, double b, double k0, double k1, double km1, double km2) {
    return k0 * (b - a) + 0.5 * k1 * (b * b - a * a) + km1 * std::log(b / a) +
           km2 * (1.0 / a - 1.0 / b);
}

}  // namespace

double crop_disjoint_prob(double s, double canvas_w, double canvas_h, double tau) {
    if (!(tau >= 0.0 && tau < 1.0))
        throw std::invalid_argument("crop_disjoint_prob: need 0 <= tau < 1");
    if (s <= 0.0 || s > std::min(canvas_w, canvas_h)) return 0.0;

    const double W = canvas_w - s;  // top-left placement ranges
    const double H = canvas_h - s;
    // IOU(V1,V2) <= tau  <=>  overlap area <= c, with c = 2 tau s^2 / (1+tau):
    // IOU = A/(2s^2 - A) is increasing in the overlap area A.
    const double c = 2.0 * tau * s * s / (1.0 + tau);
    if (c >= s * s) return 1.0;

    // A = w_ov * h_ov with w_ov = max(0, s - |x1 - x2|) and h_ov likewise;
    // the two factors are independent.
    if (c == 0.0) {
        const double pw = diff_cdf(s, W);  // Pr(w_ov > 0)
        const double ph = diff_cdf(s, H);
        return 1.0 - pw * ph;
    }
    if (W <= 0.0 && H <= 0.0) return 0.0;          // both views are the full canvas
    if (W <= 0.0) return 1.0 - diff_cdf(s - c / s, H);  // w_ov == s
    if (H <= 0.0) return 1.0 - diff_cdf(s - c / s, W);

    // Pr(A > c) = Integral over w in (w_lo, s) of Pr(h_ov > c/w) f_w(w) dw,
    // where f_w is the continuous part of the overlap-width density (the atom
    // at w_ov = 0 cannot produce area > c).
    const double w_lo = std::max(c / s, s - W);
    if (w_lo >= s) return 1.0;

    double tail = 0.0;
    double upper = s;
    // Where s - c/w >= H the factor Pr(h_ov > c/w) saturates at 1.
    if (s > H) {
        const double w_star = std::clamp(c / (s - H), w_lo, s);
        tail += overlap_density_mass(w_star, s, s, W);
        upper = w_star;
    }
    if (upper > w_lo) {
        // Pr(h_ov > c/w) = (2H z - z^2)/H^2 with z = s - c/w; multiplied by
        // f_w(w) = 2 (M + w)/W^2, M = W - s, and expanded in {1, w, 1/w, 1/w^2}.
        const double M = W - s;
        const double P = 2.0 * H * s - s * s;
        const double Q = (2.0 * s - 2.0 * H) * c;
        const double R = -c * c;
        const double scale = 2.0 / (W * W * H * H);
        tail += scale * rational_integral(w_lo, upper, P * M + Q, P, Q * M + R, R * M);
    }
    return std::clamp(1.0 - tail, 0.0, 1.0);
}

namespace {

// Length ratio |[lo, hi] ∩ [0, range]| / range; a zero placement range
// degenerates to the indicator of the forced position 0.
double axis_prob(double lo, double hi, double range) {
    if (range < 0.0) return 0.0;
    if (range == 0.0) return (lo <= 0.0 && hi >= 0.0) ? 1.0 : 0.0;
    const double len = std::min(hi, range) - std::max(lo, 0.0);
    return len > 0.0 ? len / range : 0.0;
}

}  // namespace

double layout_p1(double s, const LayoutF& layout) {
    const auto& sh = layout.shadow;
    const auto& tr = layout.trigger;
    if (s <= tr.w || s > std::min(layout.canvas_w, layout.canvas_h)) return 0.0;
    // Trigger inside the view and the view inside the shadow, per axis.
    const double px =
        axis_prob(std::max(tr.right() - s, sh.x), std::min(tr.x, sh.right() - s), layout.canvas_w - s);
    const double py =
        axis_prob(std::max(tr.bottom() - s, sh.y), std::min(tr.y, sh.bottom() - s), layout.canvas_h - s);
    return px * py;
}

double layout_p2(double s, const LayoutF& layout) {
    const auto& ref = layout.reference;
    if (s <= 0.0 || s > std::min(layout.canvas_w, layout.canvas_h)) return 0.0;
    const double px = axis_prob(ref.x, ref.right() - s, layout.canvas_w - s);
    const double py = axis_prob(ref.y, ref.bottom() - s, layout.canvas_h - s);
    return px * py;
}

double layout_p3(double s, const LayoutF& layout, double tau) {
    return crop_disjoint_prob(s, layout.canvas_w, layout.canvas_h, tau);
}

namespace {

// Simpson on [a, b] with n panels (n even, n >= 2).
template <typename F>
double simpson(F&& f, double a, double b, int n) {
    const double h = (b - a) / n;
    double sum = f(a) + f(b);
    for (int i = 1; i < n; ++i) sum += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

}  // namespace

double p_joint(const LayoutF& layout, const ProbParams& params, int min_panels) {
    validate(layout);
    if (min_panels < 2) throw std::invalid_argument("p_joint: need at least 2 panels");
    const double e_l = layout.trigger.w;
    const double S =
        params.S > 0.0 ? params.S : std::min(layout.canvas_w, layout.canvas_h);
    if (!(S > e_l)) throw std::invalid_argument("p_joint: need S > e_l");
    const double tau = params.tau;

    // Breakpoints of the piecewise-smooth integrand: where the per-axis
    // interval expressions switch branches, plus the canvas half-sides where
    // the overlap-probability case structure changes.
    const auto& sh = layout.shadow;
    const auto& tr = layout.trigger;
    const auto& ref = layout.reference;
    std::vector<double> cuts = {tr.right() - sh.x,   tr.bottom() - sh.y,
                                sh.right() - tr.x,   sh.bottom() - tr.y,
                                ref.w,               ref.h,
                                sh.w,                sh.h,
                                layout.canvas_w / 2, layout.canvas_h / 2};
    std::vector<double> grid = {e_l, S};
    for (double c : cuts)
        if (c > e_l && c < S) grid.push_back(c);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end(),
                           [](double a, double b) { return std::abs(a - b) < 1e-12; }),
               grid.end());

    auto integrand = [&](double s) {
        return layout_p1(s, layout) * layout_p2(s, layout) * layout_p3(s, layout, tau);
    };

    double total = 0.0;
    const double span = S - e_l;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double a = grid[i], b = grid[i + 1];
        int n = static_cast<int>(std::ceil(min_panels * (b - a) / span));
        n = std::max(2, n + (n % 2));
        total += simpson(integrand, a, b, n);
    }
    return total / span;
}

}  // namespace cropcraft
