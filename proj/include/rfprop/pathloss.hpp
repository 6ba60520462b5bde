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

#include <cstdint>

#include "rfprop/types.hpp"

namespace rfprop {

// Free-space path loss 20 log10(4 pi f d0 / c) with the exact Friis
// constant. At d0 = 1 m this is 32.448 + 20 log10(f_GHz); the close-in
// model intercept below rounds the constant to 32.4.
double fspl_db(FrequencyGhz f, DistanceM d0);

// Close-in model intercept A = 32.4 + 20 log10(f_GHz), the 1-m free-space
// anchor in its conventional rounded form. Used consistently by both the
// prediction and the regression paths.
double ci_intercept_db(FrequencyGhz f);

// Mean CI path loss: A + 10 n log10(d). Deterministic; the shadow-fading
// term is a residual model and never part of the mean prediction.
// Requires d >= 1 m (the close-in reference distance).
double ci_predict_db(FrequencyGhz f, DistanceM d, const ModelParams& params);

// CI model extended with a diffraction component: ci_predict + alpha * phi.
double ci_diff_predict_db(FrequencyGhz f, DistanceM d, DiffractionDb phi,
                          const ModelParams& params);

// One shadow-fading draw: mean_pl plus a zero-mean Gaussian with standard
// deviation sigma_db. All randomness derives from the seed, so a given
// (mean, sigma, seed) triple always returns the same value.
double sample_shadowed_db(double mean_pl_db, double sigma_db, std::uint64_t seed);

}  // namespace rfprop
