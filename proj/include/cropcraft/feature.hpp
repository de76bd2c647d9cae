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

#include <vector>

namespace cropcraft {

/// A unit reference direction u and a nonzero feature vector v in R^d, d >= 2.
struct FeaturePair {
    std::vector<double> u;
    std::vector<double> v;
};

/// v split against u: v = alpha*u + v_perp with v_perp orthogonal to u.
/// cos_sim = alpha / sqrt(alpha^2 + |v_perp|^2) and loss = 1 - cos_sim.
struct Decomposition {
    double alpha = 0.0;
    std::vector<double> v_perp;
    double cos_sim = 0.0;
    double loss = 0.0;
};

/// Throws std::invalid_argument for non-unit u, zero v, d < 2 or mismatched
/// dimensions.
Decomposition decompose(const FeaturePair& pair);

struct LossGradients {
    double d_alpha = 0.0;    // d(1 - cos)/d alpha      = -p / (alpha^2+p)^{3/2}
    double d_perp_sq = 0.0;  // d(1 - cos)/d |v_perp|^2 = alpha / (2 (alpha^2+p)^{3/2})
};

/// Exact gradients of 1 - alpha/sqrt(alpha^2 + p) at (alpha, p = |v_perp|^2).
/// Requires p >= 0 and (alpha, p) != (0, 0).
LossGradients loss_gradients(double alpha, double v_perp_sq);

}  // namespace cropcraft
