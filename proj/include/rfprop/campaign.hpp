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
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rfprop/terrain.hpp"
#include "rfprop/types.hpp"

namespace rfprop {

// Measurement-system parameters. The link budget collapses antenna gains
// and cable losses into a single additive calibration constant; the LNA
// gain and noise level are kept for documentation and the censoring rule.
struct SystemParams {
    double tx_power_dbm = 36.0;
    double lna_gain_db = 40.0;
    double noise_floor_dbm = -110.0;
    double effective_rx_level_dbm = -100.0;
    std::vector<double> frequencies_mhz = {1400.0, 2250.0};
    double tx_height_m = 15.0;
    double rx_height_m = 2.0;
    double calibration_db = 0.0;
};

void validate(const SystemParams& p);

// One receiver position. Path loss is derived from received power at load
// time; the diffraction columns and the LOS class arrive either
// precomputed in the measurement file or from terrain profiles.
struct MeasurementSample {
    std::string id;
    double x_m = 0.0;
    double y_m = 0.0;
    double distance_m = 0.0;
    double freq_ghz = 0.0;
    double rx_power_dbm = 0.0;
    double path_loss_db = 0.0;
    std::optional<double> phi_ske_db;
    std::optional<double> phi_db_db;
    std::optional<LosClass> los;
};

struct Campaign {
    SystemParams system;
    std::vector<MeasurementSample> samples;
    std::string provenance;
    std::size_t censored_count = 0;  // rows dropped below the effective reception level
    std::map<std::string, TerrainProfile> profiles;  // keyed by sample id, may be empty
};

// Link budget: path_loss = tx_power - rx_power + calibration.
double derive_path_loss_db(double rx_power_dbm, const SystemParams& system);

// Loads and validates a campaign from a measurement CSV. Every sample must
// either carry precomputed phi columns or have `<id>.profile` under
// profiles_dir; rows below the effective reception level are censored and
// counted. Malformed rows fail with their line number.
Campaign load_campaign(const std::filesystem::path& measurements_csv,
                       const std::optional<std::filesystem::path>& profiles_dir,
                       const SystemParams& system);

// Writes measurements.csv, profiles/<id>.profile and system.json under
// dir. load_campaign_dir inverts it exactly.
void save_campaign(const Campaign& campaign, const std::filesystem::path& dir);
Campaign load_campaign_dir(const std::filesystem::path& dir);

// Reads a system.json sidecar (as written by save_campaign) if present
// next to a measurement file. Returns the system parameters plus the
// recorded provenance.
std::optional<std::pair<SystemParams, std::string>> load_system_sidecar(
    const std::filesystem::path& measurements_csv);

// Fills phi_ske_db, phi_db_db and los for every sample from the campaign's
// terrain profiles. A sample without a profile is an error (named in the
// message) unless it already carries all three derived fields. Computing
// from the same profiles is deterministic, so re-running changes nothing.
void attach_diffraction(Campaign& campaign, const EffectiveEarth& earth = EffectiveEarth{});

enum class TerrainStyle { flat, hill, rolling };

std::string to_string(TerrainStyle s);
TerrainStyle terrain_style_from_string(const std::string& s);

// Generates a ground-truth campaign: log-uniform distances, synthetic
// terrain per style at 30 m spacing, diffraction per `kind`, measured path
// loss = model mean + seeded Gaussian shadow fading. The truth parameters
// and seed are recorded in the provenance, and the emitted system params
// disable censoring so the generating model stays identifiable.
Campaign synth_campaign(const ModelParams& truth, const ModelKind& kind, std::size_t n_samples,
                        std::pair<double, double> distance_range_m, double freq_ghz,
                        TerrainStyle style, std::uint64_t seed);

}  // namespace rfprop
