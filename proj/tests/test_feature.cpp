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

#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "cropcraft/feature.hpp"
#include "cropcraft/rng.hpp"

using namespace cropcraft;

TEST_SUITE_BEGIN("feature");

namespace {

double norm_sq(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
}

double loss_at(double alpha, double p) { return 1.0 - alpha / std::sqrt(alpha * alpha + p); }

}  // namespace

TEST_CASE("decomposition basics") {
    const Decomposition id = decompose({{1.0, 0.0}, {1.0, 0.0}});
    CHECK(id.alpha == doctest::Approx(1.0));
    CHECK(norm_sq(id.v_perp) == doctest::Approx(0.0));
    CHECK(id.cos_sim == doctest::Approx(1.0));
    CHECK(id.loss == doctest::Approx(0.0));

    const Decomposition orth = decompose({{1.0, 0.0}, {0.0, 1.0}});
    CHECK(orth.alpha == doctest::Approx(0.0));
    CHECK(orth.cos_sim == doctest::Approx(0.0));
    CHECK(orth.loss == doctest::Approx(1.0));

    const Decomposition mix = decompose({{1.0, 0.0}, {0.6, 0.8}});
    CHECK(mix.alpha == doctest::Approx(0.6));
    CHECK(std::sqrt(norm_sq(mix.v_perp)) == doctest::Approx(0.8));
    CHECK(mix.cos_sim == doctest::Approx(0.6));
    CHECK(mix.loss == doctest::Approx(0.4));
}

TEST_CASE("decomposition validation") {
    CHECK_THROWS_AS(decompose({{2.0, 0.0}, {1.0, 0.0}}), std::invalid_argument);  // non-unit u
    CHECK_THROWS_AS(decompose({{1.0, 0.0}, {0.0, 0.0}}), std::invalid_argument);  // zero v
    CHECK_THROWS_AS(decompose({{1.0}, {1.0}}), std::invalid_argument);            // d < 2
    CHECK_THROWS_AS(decompose({{1.0, 0.0}, {1.0, 0.0, 0.0}}), std::invalid_argument);
}

TEST_CASE("reconstruction and orthogonality on random vectors") {
    Philox gen(5150, 0);
    for (int trial = 0; trial < 500; ++trial) {
        const int d = 2 + static_cast<int>(gen.next_below(63));
        std::vector<double> u(d), v(d);
        for (auto& x : u) x = gen.uniform(-1.0, 1.0);
        const double un = std::sqrt(norm_sq(u));
        for (auto& x : u) x /= un;
        for (auto& x : v) x = gen.uniform(-10.0, 10.0);
        if (norm_sq(v) == 0.0) v[0] = 1.0;

        const Decomposition dec = decompose({u, v});
        double recon_err = 0.0, dot_perp = 0.0, vmag = 0.0;
        for (int i = 0; i < d; ++i) {
            const double r = dec.alpha * u[i] + dec.v_perp[i] - v[i];
            recon_err += r * r;
            dot_perp += dec.v_perp[i] * u[i];
            vmag += v[i] * v[i];
        }
        CHECK(std::sqrt(recon_err) <= 1e-10 * std::sqrt(vmag));
        CHECK(std::abs(dot_perp) <= 1e-10);
        CHECK(dec.cos_sim ==
              doctest::Approx(dec.alpha / std::sqrt(dec.alpha * dec.alpha + norm_sq(dec.v_perp))));
    }
}

TEST_CASE("positive scaling of v preserves the cosine") {
    Philox gen(6, 0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> u = {0.6, 0.0, 0.8}, v(3);
        for (auto& x : v) x = gen.uniform(-5.0, 5.0);
        const double c = gen.uniform(0.1, 20.0);
        std::vector<double> cv = v;
        for (auto& x : cv) x *= c;

        const Decomposition a = decompose({u, v});
        const Decomposition b = decompose({u, cv});
        CHECK(b.alpha == doctest::Approx(c * a.alpha));
        CHECK(norm_sq(b.v_perp) == doctest::Approx(c * c * norm_sq(a.v_perp)));
        CHECK(b.cos_sim == doctest::Approx(a.cos_sim));
    }
}

TEST_CASE("gradient values") {
    // alpha^2 + p = 1 here, so the gradients are -p and alpha/2.
    const LossGradients g = loss_gradients(0.6, 0.64);
    CHECK(g.d_alpha == doctest::Approx(-0.64));
    CHECK(g.d_perp_sq == doctest::Approx(0.3));

    // Perfect alignment is stationary in alpha.
    const LossGradients aligned = loss_gradients(2.0, 0.0);
    CHECK(aligned.d_alpha == 0.0);
    CHECK(aligned.d_perp_sq == doctest::Approx(1.0 / 8.0));

    const LossGradients unit = loss_gradients(1.0, 1.0);
    CHECK(unit.d_alpha == doctest::Approx(-1.0 / std::pow(2.0, 1.5)));
    CHECK(unit.d_perp_sq == doctest::Approx(1.0 / (2.0 * std::pow(2.0, 1.5))));

    CHECK_THROWS_AS(loss_gradients(0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(loss_gradients(1.0, -0.1), std::invalid_argument);
}

TEST_CASE("gradients match central finite differences") {
    Philox gen(31415, 0);
    const double h = 1e-6;
    for (int trial = 0; trial < 1000; ++trial) {
        const double alpha = gen.uniform(0.01, 10.0);
        const double p = gen.uniform(0.01, 10.0);
        const LossGradients g = loss_gradients(alpha, p);
        const double fd_alpha = (loss_at(alpha + h, p) - loss_at(alpha - h, p)) / (2 * h);
        const double fd_p = (loss_at(alpha, p + h) - loss_at(alpha, p - h)) / (2 * h);
        CHECK(std::abs(g.d_alpha - fd_alpha) <= 1e-4 * std::max(1.0, std::abs(g.d_alpha)));
        CHECK(std::abs(g.d_perp_sq - fd_p) <= 1e-4 * std::max(1.0, std::abs(g.d_perp_sq)));
    }
}

TEST_CASE("gradient signs over the valid domain") {
    Philox gen(271828, 0);
    for (int trial = 0; trial < 2000; ++trial) {
        const double alpha = gen.uniform(-5.0, 10.0);
        const double p = gen.uniform(0.0, 10.0);
        if (alpha == 0.0 && p == 0.0) continue;
        const LossGradients g = loss_gradients(alpha, p);
        CHECK(g.d_alpha <= 0.0);
        if (alpha >= 0.0) CHECK(g.d_perp_sq >= 0.0);
        if (p == 0.0) CHECK(g.d_alpha == 0.0);
        if (alpha == 0.0) CHECK(g.d_perp_sq == 0.0);
    }
}

TEST_SUITE_END();
