// SPDX-License-Identifier: Apache-2.0
//
// rfprop - close-in path loss modelling with terrain diffraction
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "rfprop/regression.hpp"

using namespace rfprop;

namespace {

// Sufficient statistics of SSE(B, C) over z = y_hat - a, so a grid search
// evaluates each candidate in O(1):
//   SSE = Szz - 2B S1z - 2C S2z + B^2 S11 + 2BC S12 + C^2 S22.
struct SseQuadratic {
    double szz = 0.0, s1z = 0.0, s2z = 0.0, s11 = 0.0, s12 = 0.0, s22 = 0.0;

    explicit SseQuadratic(std::span<const RegressionSample> samples) {
        for (const auto& s : samples) {
            const double z = s.y_hat - s.a;
            szz += z * z;
            s1z += s.x1 * z;
            s2z += s.x2 * z;
            s11 += s.x1 * s.x1;
            s12 += s.x1 * s.x2;
            s22 += s.x2 * s.x2;
        }
    }
    double operator()(double b, double c) const {
        return szz - 2.0 * b * s1z - 2.0 * c * s2z + b * b * s11 + 2.0 * b * c * s12 +
               c * c * s22;
    }
};

struct GridMin {
    double b, c, sse;
};

GridMin grid_search(const SseQuadratic& q, double b_lo, double b_hi, double c_lo, double c_hi,
                    double step) {
    GridMin best{0.0, 0.0, 1e300};
    for (double b = b_lo; b <= b_hi + 0.5 * step; b += step)
        for (double c = c_lo; c <= c_hi + 0.5 * step; c += step) {
            const double sse = q(b, c);
            if (sse < best.sse) best = {b, c, sse};
        }
    return best;
}

// Coarse pass over the stated box, then two refinements around the best
// cell. Final resolution 1e-5 certifies the argmin far below the 1e-3
// comparison tolerance.
GridMin grid_oracle_joint(std::span<const RegressionSample> samples) {
    const SseQuadratic q(samples);
    GridMin g = grid_search(q, 1.0, 4.0, 0.0, 2.0, 1e-2);
    g = grid_search(q, g.b - 2e-2, g.b + 2e-2, std::max(g.c - 2e-2, 0.0), g.c + 2e-2, 1e-3);
    g = grid_search(q, g.b - 2e-3, g.b + 2e-3, std::max(g.c - 2e-3, 0.0), g.c + 2e-3, 1e-5);
    return g;
}

std::vector<RegressionSample> campaign_like(std::mt19937_64& rng, std::size_t n, double ple,
                                            double alpha, double sigma) {
    std::uniform_real_distribution<double> logd(1.0, std::log10(12500.0));
    std::normal_distribution<double> x2noise(0.0, 5.0);
    std::normal_distribution<double> shadow(0.0, sigma);
    const double a = 35.322560713564755;  // 32.4 + 20 log10(1.4)

    std::vector<RegressionSample> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x1 = 10.0 * logd(rng);
        const double x2 = std::clamp(0.8 * (x1 - 20.0) + x2noise(rng), 0.0, 40.0);
        const double y = a + ple * x1 + alpha * x2 + (sigma > 0.0 ? shadow(rng) : 0.0);
        out.push_back({x1, x2, y, a});
    }
    return out;
}

}  // namespace

TEST_CASE("single-sample CI fit is the closed-form ratio") {
    std::vector<RegressionSample> s{{30.0, 0.0, 99.8, 35.0}};
    const auto fit = fit_ci(s);
    CHECK(fit.params.ple == doctest::Approx(2.16).epsilon(1e-14));
    CHECK(fit.params.alpha == 0.0);
    CHECK(fit.n_samples == 1);
    CHECK(std::abs(fit.residuals[0]) < 1e-12);
    CHECK(fit.params.sigma_db < 1e-12);
    CHECK(fit.kind.variant == ModelVariant::ci);
    CHECK(fit.kind.alpha_mode == AlphaMode::not_applicable);
}

TEST_CASE("noiseless data is recovered to rounding error") {
    std::mt19937_64 rng(101);

    SUBCASE("plain CI") {
        auto s = campaign_like(rng, 400, 2.16, 0.0, 0.0);
        for (auto& x : s) x.x2 = 0.0;
        const auto fit = fit_ci(s);
        CHECK(fit.params.ple == doctest::Approx(2.16).epsilon(1e-12));
        CHECK(fit.params.sigma_db < 1e-9);
    }
    SUBCASE("fixed alpha") {
        const auto s = campaign_like(rng, 400, 2.24, 1.0, 0.0);
        const auto fit = fit_ci_diffraction_fixed_alpha(s, 1.0);
        CHECK(fit.params.ple == doctest::Approx(2.24).epsilon(1e-12));
        CHECK(fit.params.alpha == 1.0);
        CHECK(fit.params.sigma_db < 1e-9);
        CHECK(fit.kind.alpha_mode == AlphaMode::fixed_one);
    }
    SUBCASE("joint") {
        const auto s = campaign_like(rng, 400, 2.28, 0.87, 0.0);
        const auto fit = fit_ci_diffraction_joint(s);
        CHECK(fit.params.ple == doctest::Approx(2.28).epsilon(1e-10));
        CHECK(fit.params.alpha == doctest::Approx(0.87).epsilon(1e-10));
        CHECK(fit.params.sigma_db < 1e-9);
        CHECK(fit.kind.alpha_mode == AlphaMode::regressed);
    }
}

TEST_CASE("CI fit matches a 1-D grid search") {
    std::mt19937_64 rng(202);
    for (int rep = 0; rep < 5; ++rep) {
        auto s = campaign_like(rng, 60, 1.8 + 0.4 * rep, 0.0, 6.0);
        for (auto& x : s) x.x2 = 0.0;
        const auto fit = fit_ci(s);

        const SseQuadratic q(s);
        double best_b = 0.0, best_sse = 1e300;
        for (double b = 1.0; b <= 5.0 + 5e-5; b += 1e-4) {
            const double sse = q(b, 0.0);
            if (sse < best_sse) {
                best_sse = sse;
                best_b = b;
            }
        }
        CHECK(testutil::close(fit.params.ple, best_b, 1e-4));
        CHECK(fit.sse <= best_sse + 1e-9 * (1.0 + best_sse));
    }
}

TEST_CASE("joint fit matches a 2-D grid search on randomized campaigns") {
    std::mt19937_64 rng(303);
    std::uniform_real_distribution<double> ple_pick(1.5, 3.5);
    std::uniform_real_distribution<double> alpha_pick(0.2, 1.8);
    std::uniform_real_distribution<double> sigma_pick(2.0, 10.0);
    std::uniform_int_distribution<std::size_t> n_pick(5, 50);

    for (int rep = 0; rep < 10; ++rep) {
        const auto s =
            campaign_like(rng, n_pick(rng), ple_pick(rng), alpha_pick(rng), sigma_pick(rng));
        FitResult fit;
        try {
            fit = fit_ci_diffraction_joint(s);
        } catch (const numerical_error&) {
            continue;  // degenerate draw (e.g. all x2 clamped to 0)
        }
        const auto grid = grid_oracle_joint(s);
        CHECK(testutil::close(fit.params.ple, grid.b, 1e-3));
        CHECK(testutil::close(fit.params.alpha, grid.c, 1e-3));
        CHECK(fit.sse <= grid.sse + 1e-9 * (1.0 + grid.sse));
    }
}

TEST_CASE("joint fit is a local minimum under explicit perturbation") {
    std::mt19937_64 rng(404);
    const auto s = campaign_like(rng, 200, 2.4, 0.9, 5.0);
    const auto fit = fit_ci_diffraction_joint(s);
    const ModelKind kind{ModelVariant::ci_diff_ske, AlphaMode::regressed};

    for (double db : {-1e-2, -1e-3, 0.0, 1e-3, 1e-2}) {
        for (double dc : {-1e-2, -1e-3, 0.0, 1e-3, 1e-2}) {
            if (db == 0.0 && dc == 0.0) continue;
            ModelParams p = fit.params;
            p.ple += db;
            p.alpha += dc;
            const auto perturbed = residual_stats(s, p, kind);
            CHECK(perturbed.sse >= fit.sse - 1e-9);
        }
    }
}

TEST_CASE("residuals are orthogonal to the regressors") {
    std::mt19937_64 rng(505);
    const auto s = campaign_like(rng, 300, 2.1, 0.7, 8.0);
    const auto joint = fit_ci_diffraction_joint(s);

    double r1 = 0.0, r2 = 0.0, max_r = 0.0, max_x = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        r1 += joint.residuals[i] * s[i].x1;
        r2 += joint.residuals[i] * s[i].x2;
        max_r = std::max(max_r, std::abs(joint.residuals[i]));
        max_x = std::max({max_x, s[i].x1, s[i].x2});
    }
    const double bound = 1e-6 * static_cast<double>(s.size()) * std::max(max_r, 1.0) * max_x;
    CHECK(std::abs(r1) <= bound);
    CHECK(std::abs(r2) <= bound);

    const auto ci = fit_ci(s);
    double c1 = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) c1 += ci.residuals[i] * s[i].x1;
    CHECK(std::abs(c1) <= bound);
}

TEST_CASE("sigma is the raw RMS of the residuals") {
    std::vector<RegressionSample> s{{10.0, 0.0, 52.0, 30.0}, {10.0, 0.0, 48.0, 30.0}};
    const ModelParams p{2.0, 0.0, 0.0};
    const auto r = residual_stats(s, p, ModelKind::ci());
    CHECK(r.residuals[0] == 2.0);
    CHECK(r.residuals[1] == -2.0);
    CHECK(r.sse == 8.0);
    CHECK(r.params.sigma_db == 2.0);
    CHECK(r.residual_mean == 0.0);
    CHECK(r.max_abs_residual == 2.0);

    std::mt19937_64 rng(606);
    const auto big = campaign_like(rng, 500, 2.3, 0.8, 6.0);
    const auto fit = fit_ci_diffraction_joint(big);
    CHECK(fit.params.sigma_db ==
          doctest::Approx(std::sqrt(fit.sse / static_cast<double>(big.size())))
              .epsilon(1e-12));
}

TEST_CASE("model nesting orders the residual errors") {
    std::mt19937_64 rng(707);
    for (int rep = 0; rep < 5; ++rep) {
        const auto s = campaign_like(rng, 120, 2.2 + 0.2 * rep, 0.9, 7.0);
        const auto joint = fit_ci_diffraction_joint(s);
        const auto ci = fit_ci(s);
        CHECK(joint.sse <= ci.sse + 1e-9);
        for (double alpha : {0.0, 0.37, 1.0, 1.7}) {
            const auto fixed = fit_ci_diffraction_fixed_alpha(s, alpha);
            CHECK(joint.sse <= fixed.sse + 1e-9);
        }
        // alpha fixed at zero collapses onto the plain CI fit.
        const auto zero = fit_ci_diffraction_fixed_alpha(s, 0.0);
        CHECK(zero.params.ple == doctest::Approx(ci.params.ple).epsilon(1e-14));
        CHECK(zero.sse == doctest::Approx(ci.sse).epsilon(1e-12));
    }
}

TEST_CASE("sample order does not change the fit") {
    std::mt19937_64 rng(808);
    auto s = campaign_like(rng, 250, 2.5, 0.6, 9.0);
    const auto before = fit_ci_diffraction_joint(s);
    std::shuffle(s.begin(), s.end(), rng);
    const auto after = fit_ci_diffraction_joint(s);
    CHECK(after.params.ple == doctest::Approx(before.params.ple).epsilon(1e-10));
    CHECK(after.params.alpha == doctest::Approx(before.params.alpha).epsilon(1e-10));
    CHECK(after.sse == doctest::Approx(before.sse).epsilon(1e-10));
}

TEST_CASE("degenerate systems are rejected") {
    CHECK_THROWS_AS(fit_ci(std::vector<RegressionSample>{}), validation_error);

    std::vector<RegressionSample> at_ref{{0.0, 0.0, 35.0, 35.0}, {0.0, 0.0, 36.0, 35.0}};
    CHECK_THROWS_AS(fit_ci(at_ref), numerical_error);
    CHECK_THROWS_AS(fit_ci_diffraction_fixed_alpha(at_ref, 1.0), numerical_error);

    std::mt19937_64 rng(909);
    auto zero_x2 = campaign_like(rng, 50, 2.2, 0.0, 4.0);
    for (auto& x : zero_x2) x.x2 = 0.0;
    try {
        fit_ci_diffraction_joint(zero_x2);
        FAIL("expected numerical_error");
    } catch (const numerical_error& e) {
        CHECK(std::string(e.what()).find("fit_ci") != std::string::npos);
    }

    // x2 exactly proportional to x1: Gram matrix is singular.
    auto collinear = campaign_like(rng, 50, 2.2, 0.5, 4.0);
    for (auto& x : collinear) x.x2 = 0.5 * x.x1;
    CHECK_THROWS_AS(fit_ci_diffraction_joint(collinear), numerical_error);

    std::vector<RegressionSample> one{{30.0, 5.0, 110.0, 35.0}};
    CHECK_THROWS_AS(fit_ci_diffraction_joint(one), validation_error);

    std::vector<RegressionSample> bad{{30.0, -1.0, 110.0, 35.0}, {31.0, 0.0, 111.0, 35.0}};
    CHECK_THROWS_AS(fit_ci_diffraction_joint(bad), validation_error);
    std::vector<RegressionSample> nan{{30.0, 0.0, std::nan(""), 35.0}, {31.0, 0.0, 111.0, 35.0}};
    CHECK_THROWS_AS(fit_ci(nan), validation_error);
    CHECK_THROWS_AS(
        fit_ci_diffraction_fixed_alpha(std::vector<RegressionSample>{{30.0, 1.0, 110.0, 35.0}},
                                       std::nan("")),
        validation_error);
}

TEST_CASE("mixed-frequency pooling uses the per-sample intercept") {
    // Same truth at two frequencies; the per-sample intercepts absorb the
    // frequency dependence, so a pooled fit recovers the shared slope.
    std::mt19937_64 rng(1010);
    std::uniform_real_distribution<double> logd(1.0, 4.0);
    const double a14 = 35.322560713564755;
    const double a225 = 39.443650362227245;

    std::vector<RegressionSample> pooled;
    for (int i = 0; i < 200; ++i) {
        const double x1 = 10.0 * logd(rng);
        const double x2 = 0.4 * x1;
        const double a = (i % 2 == 0) ? a14 : a225;
        pooled.push_back({x1, x2, a + 2.28 * x1 + 0.87 * x2, a});
    }
    // x2 proportional to x1 within one frequency would be collinear, so jitter.
    std::normal_distribution<double> jit(0.0, 3.0);
    for (auto& s : pooled) {
        const double dx = std::abs(jit(rng));
        s.x2 += dx;
        s.y_hat += 0.87 * dx;
    }
    const auto fit = fit_ci_diffraction_joint(pooled);
    CHECK(fit.params.ple == doctest::Approx(2.28).epsilon(1e-9));
    CHECK(fit.params.alpha == doctest::Approx(0.87).epsilon(1e-9));
}
