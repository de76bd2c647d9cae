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

#include "cropcraft/geometry.hpp"

namespace cropcraft {

/// Parameters of the canonical one-gap layout family: canvas (2*r_l + g,
/// r_l), reference at (0,0), shadow at (r_l + g, 0), trigger centered.
/// Crops are squares with side drawn uniformly from (e_l, S] and top-left
/// corner uniform over all in-canvas positions.
struct ProbParams {
    double r_l = 0.0;   // reference/shadow side
    double e_l = 0.0;   // trigger side
    double g = 0.0;     // gap between reference and shadow
    double tau = 0.05;  // IOU threshold for the "views disjoint" event
    double S = 0.0;     // max crop side; 0 means min(canvas_w, canvas_h)

    double canvas_w() const { return 2.0 * r_l + g; }
    double canvas_h() const { return r_l; }
    double max_side() const { return S > 0.0 ? S : std::min(canvas_w(), canvas_h()); }

    void validate() const;
};

/// Probability that a random side-s crop contains the trigger and lies
/// inside the shadow. Piecewise: (s-e_l)^2 / ((2 r_l + g - s)(r_l - s)) up to
/// the midpoint (r_l+e_l)/2, then (r_l - s)/(2 r_l + g - s); zero outside
/// (e_l, r_l].
double p1(double s, const ProbParams& params);

/// Probability that a random side-s crop lies inside the reference:
/// (r_l - s)/(2 r_l + g - s) for s <= r_l, else 0.
double p2(double s, const ProbParams& params);

/// Probability that two independent random side-s crops have IOU <= tau.
/// Exact: IOU <= tau is equivalent to overlap area <= 2*tau*s^2/(1+tau), the
/// overlap factors into independent per-axis interval overlaps, and the
/// resulting one-dimensional integral is piecewise rational with a closed
/// form. Returns 0 for s outside (0, min(canvas_w, canvas_h)].
double p3(double s, const ProbParams& params);

/// Pr(IOU(V1, V2) <= tau) for two independent uniformly placed side-s square
/// crops in a canvas_w x canvas_h canvas. The building block behind p3 and
/// the layout-generalized variant.
double crop_disjoint_prob(double s, double canvas_w, double canvas_h, double tau);

/// Layout-generalized per-side probabilities: valid top-left interval length
/// per axis divided by the total placement range, for the layout's actual
/// placements. A degenerate axis (placement range 0) contributes an
/// indicator factor.
double layout_p1(double s, const LayoutF& layout);
double layout_p2(double s, const LayoutF& layout);
double layout_p3(double s, const LayoutF& layout, double tau);

/// The product objective: quadrature of p1(s) p2(s) p3(s) over s in (e_l, S]
/// normalized by S - e_l, using the layout's actual placements. Composite
/// Simpson on at least `min_panels` panels with the integrand's breakpoints
/// forced onto the grid.
double p_joint(const LayoutF& layout, const ProbParams& params, int min_panels = 1024);

}  // namespace cropcraft
