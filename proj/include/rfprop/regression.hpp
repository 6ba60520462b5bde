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

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rfprop/types.hpp"

namespace rfprop {

// One observation of the fixed-intercept linear model
//   y_hat ~ a + B * x1 + C * x2
// with x1 = 10 log10(d_m), x2 = diffraction loss in dB, and a the
// per-sample free-space intercept 32.4 + 20 log10(f_GHz). Carrying the
// intercept per sample lets mixed-frequency campaigns share one fit;
// single-frequency campaigns reduce to a single constant A.
struct RegressionSample {
    double x1;
    double x2;
    double y_hat;
    double a;
};

// Result of a least-squares fit plus its residual statistics.
// sigma_db is the raw RMS of the residuals, sqrt(SSE/N): the model fixes
// the intercept, so the residual mean is generally nonzero and is reported
// separately rather than removed.
struct FitResult {
    ModelKind kind;
    ModelParams params;
    std::size_t n_samples = 0;
    double sse = 0.0;
    std::vector<double> residuals;  // y_hat_n - y_n, in sample order
    double residual_mean = 0.0;
    double max_abs_residual = 0.0;
};

// Condition-number limit on the 2x2 Gram matrix of the joint fit.
inline constexpr double gram_condition_limit = 1.0e12;

// One-parameter fit of the plain CI model:
//   B = sum x1 (y_hat - a) / sum x1^2.
// Throws numerical_error when every x1 is zero (all paths at 1 m).
FitResult fit_ci(std::span<const RegressionSample> samples);

// CI + diffraction with alpha held fixed; only the slope is regressed:
//   B = sum x1 (y_hat - a - alpha x2) / sum x1^2.
FitResult fit_ci_diffraction_fixed_alpha(std::span<const RegressionSample> samples,
                                         double alpha_fixed,
                                         ModelVariant variant = ModelVariant::ci_diff_ske);

// Joint (B, C) fit via the 2x2 fixed-intercept normal equations
//   [sum x1x1  sum x1x2] [B]   [sum x1 (y_hat - a)]
//   [sum x2x1  sum x2x2] [C] = [sum x2 (y_hat - a)].
// Throws numerical_error when the Gram matrix is singular or its condition
// number exceeds gram_condition_limit (e.g. all x2 = 0); the message points
// the caller at fit_ci.
FitResult fit_ci_diffraction_joint(std::span<const RegressionSample> samples,
                                   ModelVariant variant = ModelVariant::ci_diff_ske);

// Residuals and error statistics of a given parameter set against samples:
// r_n = y_hat_n - (a_n + ple x1_n + alpha x2_n).
FitResult residual_stats(std::span<const RegressionSample> samples, const ModelParams& params,
                         const ModelKind& kind);

}  // namespace rfprop
