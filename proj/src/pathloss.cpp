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

#include "rfprop/pathloss.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace rfprop {

std::string to_string(ModelVariant v) {
    switch (v) {
        case ModelVariant::ci: return "ci";
        case ModelVariant::ci_diff_ske: return "ci+ske";
        case ModelVariant::ci_diff_db: return "ci+db";
    }
    return "?";
}

std::string to_string(AlphaMode m) {
    switch (m) {
        case AlphaMode::fixed_one: return "fixed1";
        case AlphaMode::regressed: return "regressed";
        case AlphaMode::not_applicable: return "n/a";
    }
    return "?";
}

ModelVariant model_variant_from_string(const std::string& s) {
    if (s == "ci") return ModelVariant::ci;
    if (s == "ci+ske") return ModelVariant::ci_diff_ske;
    if (s == "ci+db") return ModelVariant::ci_diff_db;
    throw validation_error("unknown model variant: " + s);
}

AlphaMode alpha_mode_from_string(const std::string& s) {
    if (s == "fixed1") return AlphaMode::fixed_one;
    if (s == "regressed") return AlphaMode::regressed;
    if (s == "n/a") return AlphaMode::not_applicable;
    throw validation_error("unknown alpha mode: " + s);
}

double fspl_db(FrequencyGhz f, DistanceM d0) {
    return 20.0 * std::log10(4.0 * std::numbers::pi * f.hz() * d0.value / speed_of_light_mps);
}

double ci_intercept_db(FrequencyGhz f) {
    return 32.4 + 20.0 * std::log10(f.value);
}

double ci_predict_db(FrequencyGhz f, DistanceM d, const ModelParams& params) {
    validate(params);
    if (d.value < 1.0)
        throw validation_error("ci model: distance below the 1 m reference distance");
    return ci_intercept_db(f) + 10.0 * params.ple * std::log10(d.value);
}

double ci_diff_predict_db(FrequencyGhz f, DistanceM d, DiffractionDb phi,
                          const ModelParams& params) {
    return ci_predict_db(f, d, params) + params.alpha * phi.value;
}

double sample_shadowed_db(double mean_pl_db, double sigma_db, std::uint64_t seed) {
    if (!std::isfinite(sigma_db) || sigma_db < 0.0)
        throw validation_error("shadow fading sigma must be finite and >= 0 dB");
    if (sigma_db == 0.0) return mean_pl_db;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, sigma_db);
    return mean_pl_db + gauss(rng);
}

}  // namespace rfprop
