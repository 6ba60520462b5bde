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

#include "rfprop/regression.hpp"

#include <cmath>

namespace rfprop {

namespace {

// Neumaier compensated accumulator. Campaign-scale sums (N ~ 1e4, terms of
// mixed magnitude) stay reproducible to the last bit in a fixed order.
class CompensatedSum {
  public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

void check_samples(std::span<const RegressionSample> samples) {
    if (samples.empty()) throw validation_error("regression: empty sample set");
    for (const auto& s : samples) {
        if (!std::isfinite(s.x1) || !std::isfinite(s.x2) || !std::isfinite(s.y_hat) ||
            !std::isfinite(s.a))
            throw validation_error("regression: samples must be finite");
        if (s.x1 < 0.0) throw validation_error("regression: x1 must be >= 0 (d >= 1 m)");
        if (s.x2 < 0.0) throw validation_error("regression: x2 must be >= 0 (phi is a loss)");
    }
}

}  // namespace

FitResult residual_stats(std::span<const RegressionSample> samples, const ModelParams& params,
                         const ModelKind& kind) {
    check_samples(samples);
    if (!std::isfinite(params.ple) || !std::isfinite(params.alpha))
        throw validation_error("residual_stats: params must be finite");

    FitResult r;
    r.kind = kind;
    r.params = params;
    r.n_samples = samples.size();
    r.residuals.reserve(samples.size());

    CompensatedSum sse, rsum;
    double max_abs = 0.0;
    for (const auto& s : samples) {
        const double predicted = s.a + params.ple * s.x1 + params.alpha * s.x2;
        const double res = s.y_hat - predicted;
        r.residuals.push_back(res);
        sse.add(res * res);
        rsum.add(res);
        max_abs = std::max(max_abs, std::abs(res));
    }
    r.sse = sse.value();
    r.residual_mean = rsum.value() / static_cast<double>(samples.size());
    r.max_abs_residual = max_abs;
    r.params.sigma_db = std::sqrt(std::max(r.sse, 0.0) / static_cast<double>(samples.size()));
    return r;
}

FitResult fit_ci(std::span<const RegressionSample> samples) {
    check_samples(samples);

    CompensatedSum s11, s1y;
    for (const auto& s : samples) {
        s11.add(s.x1 * s.x1);
        s1y.add(s.x1 * (s.y_hat - s.a));
    }
    if (s11.value() <= 0.0)
        throw numerical_error("fit_ci: singular system, every sample is at the 1 m reference");

    ModelParams params;
    params.ple = s1y.value() / s11.value();
    params.alpha = 0.0;
    return residual_stats(samples, params, ModelKind::ci());
}

FitResult fit_ci_diffraction_fixed_alpha(std::span<const RegressionSample> samples,
                                         double alpha_fixed, ModelVariant variant) {
    check_samples(samples);
    if (!std::isfinite(alpha_fixed))
        throw validation_error("fit_ci_diffraction_fixed_alpha: alpha must be finite");

    CompensatedSum s11, s1y;
    for (const auto& s : samples) {
        s11.add(s.x1 * s.x1);
        s1y.add(s.x1 * (s.y_hat - s.a - alpha_fixed * s.x2));
    }
    if (s11.value() <= 0.0)
        throw numerical_error(
            "fit_ci_diffraction_fixed_alpha: singular system, every sample is at 1 m");

    ModelParams params;
    params.ple = s1y.value() / s11.value();
    params.alpha = alpha_fixed;
    const ModelKind kind{variant, AlphaMode::fixed_one};
    return residual_stats(samples, params, kind);
}

FitResult fit_ci_diffraction_joint(std::span<const RegressionSample> samples,
                                   ModelVariant variant) {
    check_samples(samples);
    if (samples.size() < 2)
        throw validation_error("fit_ci_diffraction_joint: need at least two samples");

    CompensatedSum s11, s12, s22, b1, b2;
    for (const auto& s : samples) {
        s11.add(s.x1 * s.x1);
        s12.add(s.x1 * s.x2);
        s22.add(s.x2 * s.x2);
        const double excess = s.y_hat - s.a;
        b1.add(s.x1 * excess);
        b2.add(s.x2 * excess);
    }
    const double g11 = s11.value();
    const double g12 = s12.value();
    const double g22 = s22.value();

    // Eigenvalues of the symmetric 2x2 Gram matrix give its condition
    // number directly.
    const double tr = g11 + g22;
    const double disc = std::sqrt((g11 - g22) * (g11 - g22) + 4.0 * g12 * g12);
    const double lambda_max = 0.5 * (tr + disc);
    const double lambda_min = 0.5 * (tr - disc);
    if (!(lambda_min > 0.0) || lambda_max > gram_condition_limit * lambda_min)
        throw numerical_error(
            "fit_ci_diffraction_joint: collinear regressors (diffraction column is zero or "
            "proportional to the distance column); fit the plain CI model with fit_ci instead");

    const double det = g11 * g22 - g12 * g12;
    ModelParams params;
    params.ple = (g22 * b1.value() - g12 * b2.value()) / det;
    params.alpha = (g11 * b2.value() - g12 * b1.value()) / det;
    const ModelKind kind{variant, AlphaMode::regressed};
    return residual_stats(samples, params, kind);
}

}  // namespace rfprop
