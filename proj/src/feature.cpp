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

#include "cropcraft/feature.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cropcraft {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

}  // namespace

Decomposition decompose(const FeaturePair& pair) {
    if (pair.u.size() < 2) throw std::invalid_argument("decompose: need dimension >= 2");
    if (pair.u.size() != pair.v.size())
        throw std::invalid_argument("decompose: u and v dimensions differ");
    const double u_norm = std::sqrt(dot(pair.u, pair.u));
    if (std::abs(u_norm - 1.0) > 1e-12)
        throw std::invalid_argument("decompose: u must be unit-norm (within 1e-12)");
    const double v_norm_sq = dot(pair.v, pair.v);
    if (v_norm_sq == 0.0) throw std::invalid_argument("decompose: v must be nonzero");

    Decomposition d;
    d.alpha = dot(pair.v, pair.u);
    d.v_perp.resize(pair.v.size());
    for (std::size_t i = 0; i < pair.v.size(); ++i) d.v_perp[i] = pair.v[i] - d.alpha * pair.u[i];
    const double perp_sq = dot(d.v_perp, d.v_perp);
    d.cos_sim = d.alpha / std::sqrt(d.alpha * d.alpha + perp_sq);
    d.loss = 1.0 - d.cos_sim;
    return d;
}

LossGradients loss_gradients(double alpha, double v_perp_sq) {
    if (v_perp_sq < 0.0) throw std::invalid_argument("loss_gradients: |v_perp|^2 must be >= 0");
    const double m = alpha * alpha + v_perp_sq;
    if (m == 0.0) throw std::invalid_argument("loss_gradients: undefined at the origin");
    const double m32 = m * std::sqrt(m);
    return {-v_perp_sq / m32, alpha / (2.0 * m32)};
}

}  // namespace cropcraft
