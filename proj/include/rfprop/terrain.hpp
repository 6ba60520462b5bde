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
#include <filesystem>
#include <vector>

#include "rfprop/types.hpp"

namespace rfprop {

struct ProfilePoint {
    double distance_m;   // along-path distance from the TX site
    double elevation_m;  // terrain height above sea level
};

// Ordered elevation samples along the great-circle TX->RX path, plus the
// antenna heights above ground at the two ends. Immutable once built.
class TerrainProfile {
  public:
    TerrainProfile(std::vector<ProfilePoint> points, double tx_height_m, double rx_height_m);

    const std::vector<ProfilePoint>& points() const { return points_; }
    double tx_height_m() const { return tx_height_m_; }
    double rx_height_m() const { return rx_height_m_; }

    double total_distance_m() const { return points_.back().distance_m; }
    double tx_antenna_amsl() const { return points_.front().elevation_m + tx_height_m_; }
    double rx_antenna_amsl() const { return points_.back().elevation_m + rx_height_m_; }

    // Height of the straight TX-antenna -> RX-antenna line at distance d.
    double ray_height_amsl(double distance_m) const;

  private:
    std::vector<ProfilePoint> points_;
    double tx_height_m_;
    double rx_height_m_;
};

// Effective Earth radius model: k times the geometric radius. k = 4/3 is
// the standard median-atmosphere default.
struct EffectiveEarth {
    double k_factor;
    double radius_m;

    explicit EffectiveEarth(double k = 4.0 / 3.0)
        : k_factor(k), radius_m(k * geometric_earth_radius_m) {
        if (!std::isfinite(k) || k <= 0.0)
            throw validation_error("effective Earth k-factor must be positive");
    }
};

// Dimensionless knife-edge diffraction parameter.
struct FresnelNu {
    double value;
};

enum class LosClass { los, nlos };

// Visibility rule used by classify_los. The default is plain ray/terrain
// intersection; the alternative also treats 60% first-Fresnel-zone
// intrusion as an obstruction.
enum class LosCriterion { direct_ray, fresnel_zone_60 };

std::string to_string(LosClass c);
LosClass los_class_from_string(const std::string& s);

// Earth-bulge correction d1*d2/(2 a_e) for a point splitting the path into
// d1 + d2.
double earth_bulge_m(double d1_m, double d2_m, const EffectiveEarth& earth);

// Knife-edge parameter nu = h*sqrt(2(d1+d2)/(lambda d1 d2)) for interior
// profile point `index`, where h is the point's height (with Earth-bulge
// correction) above the straight line between the two antennas.
FresnelNu knife_edge_nu(const TerrainProfile& profile, std::size_t index, FrequencyGhz f,
                        const EffectiveEarth& earth);

// Knife-edge loss J(nu) per ITU-R P.526: for nu > -0.78,
// 6.9 + 20 log10(sqrt((nu-0.1)^2+1) + nu - 0.1), clamped at >= 0;
// zero below the threshold.
DiffractionDb knife_edge_loss(FresnelNu nu);

struct SkeResult {
    DiffractionDb loss;
    double nu_max = 0.0;
    std::size_t edge_index = 0;  // interior index of the dominant edge
    bool no_interior = false;    // profile had no interior points
};

// Single knife-edge diffraction: J(nu) at the dominant edge, defined as
// the interior point with the largest nu (earliest point on ties).
SkeResult ske_diffraction_detail(const TerrainProfile& profile, FrequencyGhz f,
                                 const EffectiveEarth& earth);
DiffractionDb ske_diffraction(const TerrainProfile& profile, FrequencyGhz f,
                              const EffectiveEarth& earth);

// Bullington construction over the given profile, including the empirical
// extension L_uc + [1 - exp(-L_uc/6)](10 + 0.02 d_km) of ITU-R P.1812.
DiffractionDb bullington_loss(const TerrainProfile& profile, FrequencyGhz f,
                              const EffectiveEarth& earth);

// First-term spherical-Earth diffraction loss for a smooth path with
// effective antenna heights h_te/h_re. Zero at or inside the marginal
// line-of-sight distance sqrt(2 a_e)(sqrt(h_te)+sqrt(h_re)). Electrical
// ground constants are fixed to land, average ground (eps_r = 22,
// sigma = 0.003 S/m), horizontal polarization.
DiffractionDb spherical_earth_loss(DistanceM d, FrequencyGhz f, double h_te_m, double h_re_m,
                                   const EffectiveEarth& earth);

struct EffectiveHeights {
    double h_te_m;
    double h_re_m;
};

// Antenna heights above the least-squares smooth surface fitted through
// the profile (surface pinned at or below ground at the path ends),
// clamped to >= 1 m.
EffectiveHeights effective_antenna_heights(const TerrainProfile& profile);

// Delta-Bullington diffraction loss: Bullington over the actual profile
// plus the spherical-Earth correction referenced to the smooth profile,
// L_ba + max(L_sph - L_bs, 0).
DiffractionDb delta_bullington(const TerrainProfile& profile, FrequencyGhz f,
                               const EffectiveEarth& earth);

// NLOS iff an interior profile point (with Earth-bulge correction) rises
// above the direct antenna-to-antenna line (strict inequality); with the
// fresnel_zone_60 criterion, intrusion into 60% of the first Fresnel zone
// also counts as an obstruction.
LosClass classify_los(const TerrainProfile& profile, FrequencyGhz f, const EffectiveEarth& earth,
                      LosCriterion criterion = LosCriterion::direct_ray);

// Profile file format: a header line `# tx_height_m=<v> rx_height_m=<v>`
// followed by one `distance_m<TAB>elevation_m` pair per line, distances
// ascending from 0.
TerrainProfile read_profile(const std::filesystem::path& path);
void write_profile(const TerrainProfile& profile, const std::filesystem::path& path);

}  // namespace rfprop
