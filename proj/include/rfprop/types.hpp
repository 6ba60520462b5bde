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

#include <cmath>
#include <stdexcept>
#include <string>

namespace rfprop {

inline constexpr double speed_of_light_mps = 299792458.0;
inline constexpr double geometric_earth_radius_m = 6371000.0;

// Error categories. The CLI maps these onto its exit-code contract:
// validation -> 1, numerical -> 2, io -> 3.
struct validation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Carrier frequency in GHz. Must be positive; the documented validity
// range of the models is 0.5 to 100 GHz (callers warn outside it, the
// type does not reject).
struct FrequencyGhz {
    double value;

    explicit FrequencyGhz(double ghz) : value(ghz) {
        if (!std::isfinite(ghz) || ghz <= 0.0)
            throw validation_error("frequency must be a positive, finite value in GHz");
    }

    double hz() const { return value * 1.0e9; }
    double wavelength_m() const { return speed_of_light_mps / hz(); }
    bool within_documented_range() const { return value >= 0.5 && value <= 100.0; }
};

// 3D TX-RX separation in meters. Positive and finite; the close-in model
// additionally requires d >= 1 m (checked at the evaluation sites, so the
// type can also carry sub-metre reference distances).
struct DistanceM {
    double value;

    explicit DistanceM(double m) : value(m) {
        if (!std::isfinite(m) || m <= 0.0)
            throw validation_error("distance must be a positive, finite value in meters");
    }
};

// Diffraction loss component in dB. Losses only: value >= 0. All
// diffraction procedures in this library guarantee non-negative outputs.
struct DiffractionDb {
    double value;

    DiffractionDb() : value(0.0) {}
    explicit DiffractionDb(double db) : value(db) {
        if (!std::isfinite(db) || db < 0.0)
            throw validation_error("diffraction loss must be finite and >= 0 dB");
    }
};

// Close-in model parameters: path loss exponent, diffraction coefficient,
// and the shadow-fading standard deviation of the residuals.
struct ModelParams {
    double ple = 2.0;
    double alpha = 0.0;
    double sigma_db = 0.0;
};

inline void validate(const ModelParams& p) {
    if (!std::isfinite(p.ple))
        throw validation_error("model params: path loss exponent must be finite");
    if (!std::isfinite(p.alpha) || p.alpha < 0.0)
        throw validation_error("model params: alpha must be finite and >= 0");
    if (!std::isfinite(p.sigma_db) || p.sigma_db < 0.0)
        throw validation_error("model params: sigma must be finite and >= 0 dB");
}

enum class ModelVariant { ci, ci_diff_ske, ci_diff_db };
enum class AlphaMode { fixed_one, regressed, not_applicable };

// A model identity: which prediction family, and how alpha was obtained.
// The plain CI model carries no diffraction term, so its alpha mode is
// always not_applicable.
struct ModelKind {
    ModelVariant variant = ModelVariant::ci;
    AlphaMode alpha_mode = AlphaMode::not_applicable;

    static ModelKind ci() { return {ModelVariant::ci, AlphaMode::not_applicable}; }
    static ModelKind diffraction(ModelVariant v, AlphaMode m) {
        ModelKind k{v, m};
        validate(k);
        return k;
    }

    static void validate(const ModelKind& k) {
        if (k.variant == ModelVariant::ci && k.alpha_mode != AlphaMode::not_applicable)
            throw validation_error("model kind: the plain CI model has no alpha mode");
        if (k.variant != ModelVariant::ci && k.alpha_mode == AlphaMode::not_applicable)
            throw validation_error("model kind: diffraction models need an alpha mode");
    }
};

std::string to_string(ModelVariant v);
std::string to_string(AlphaMode m);
ModelVariant model_variant_from_string(const std::string& s);
AlphaMode alpha_mode_from_string(const std::string& s);

}  // namespace rfprop
