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
//
// Terrain diffraction procedures: single knife-edge (ITU-R P.526) and the
// delta-Bullington construction (ITU-R P.1812 section 4.3). Everything here
// works in meters; the P.1812 text mixes km and m, so its constants appear
// re-derived for a single unit system.

#include <algorithm>
#include <cmath>
#include <limits>

#include "rfprop/terrain.hpp"

namespace rfprop {

namespace {

// Land, average ground. Fixed for this library (rural scenario defaults).
constexpr double ground_rel_permittivity = 22.0;
constexpr double ground_conductivity_spm = 0.003;

double jnu(double nu) {
    if (nu <= -0.78) return 0.0;
    const double t = nu - 0.1;
    const double j = 6.9 + 20.0 * std::log10(std::sqrt(t * t + 1.0) + t);
    // The formula dips slightly below zero just above the -0.78 threshold;
    // diffraction is a loss, so clamp.
    return std::max(j, 0.0);
}

}  // namespace

FresnelNu knife_edge_nu(const TerrainProfile& profile, std::size_t index, FrequencyGhz f,
                        const EffectiveEarth& earth) {
    const auto& pts = profile.points();
    if (index == 0 || index + 1 >= pts.size())
        throw validation_error("knife_edge_nu: index must be an interior profile point");

    const double d = profile.total_distance_m();
    const double d1 = pts[index].distance_m;
    const double d2 = d - d1;
    const double h = pts[index].elevation_m + earth_bulge_m(d1, d2, earth) -
                     profile.ray_height_amsl(d1);
    const double lambda = f.wavelength_m();
    return FresnelNu{h * std::sqrt(2.0 * (d1 + d2) / (lambda * d1 * d2))};
}

DiffractionDb knife_edge_loss(FresnelNu nu) { return DiffractionDb{jnu(nu.value)}; }

SkeResult ske_diffraction_detail(const TerrainProfile& profile, FrequencyGhz f,
                                 const EffectiveEarth& earth) {
    const auto& pts = profile.points();
    SkeResult r;
    if (pts.size() < 3) {
        r.no_interior = true;
        r.nu_max = -std::numeric_limits<double>::infinity();
        return r;
    }
    double nu_max = -std::numeric_limits<double>::infinity();
    std::size_t best = 0;
    for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
        const double nu = knife_edge_nu(profile, i, f, earth).value;
        if (nu > nu_max) {  // strict: earliest point wins ties
            nu_max = nu;
            best = i;
        }
    }
    r.nu_max = nu_max;
    r.edge_index = best;
    r.loss = knife_edge_loss(FresnelNu{nu_max});
    return r;
}

DiffractionDb ske_diffraction(const TerrainProfile& profile, FrequencyGhz f,
                              const EffectiveEarth& earth) {
    return ske_diffraction_detail(profile, f, earth).loss;
}

// --------------------------------------------------------------------------
// Bullington part (P.1812 section 4.3.1)
// --------------------------------------------------------------------------

namespace {

// Bullington construction over explicit point lists so the same routine
// serves both the actual and the smooth (zero-elevation) profile.
double bullington_uncorrected(const std::vector<ProfilePoint>& pts, double h_ts, double h_rs,
                              double lambda, double a_e) {
    if (pts.size() < 3) return 0.0;

    const double d = pts.back().distance_m;
    const double s_tr = (h_rs - h_ts) / d;  // direct-line slope

    // Highest slope from the TX antenna to an intermediate point.
    double s_tim = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
        const double d1 = pts[i].distance_m;
        const double hi = pts[i].elevation_m + d1 * (d - d1) / (2.0 * a_e);
        s_tim = std::max(s_tim, (hi - h_ts) / d1);
    }

    double nu;
    if (s_tim < s_tr) {
        // Line-of-sight case: largest knife-edge parameter against the
        // direct line.
        double nu_max = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
            const double d1 = pts[i].distance_m;
            const double d2 = d - d1;
            const double hi = pts[i].elevation_m + d1 * d2 / (2.0 * a_e);
            const double line = (h_ts * d2 + h_rs * d1) / d;
            nu_max = std::max(nu_max, (hi - line) * std::sqrt(2.0 * d / (lambda * d1 * d2)));
        }
        nu = nu_max;
    } else {
        // Trans-horizon: intersect the steepest TX-side and RX-side slopes
        // to place the equivalent Bullington point.
        double s_rim = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
            const double d1 = pts[i].distance_m;
            const double d2 = d - d1;
            const double hi = pts[i].elevation_m + d1 * d2 / (2.0 * a_e);
            s_rim = std::max(s_rim, (hi - h_rs) / d2);
        }
        const double d_b = (h_rs - h_ts + s_rim * d) / (s_tim + s_rim);
        const double line = (h_ts * (d - d_b) + h_rs * d_b) / d;
        nu = (h_ts + s_tim * d_b - line) * std::sqrt(2.0 * d / (lambda * d_b * (d - d_b)));
    }
    return jnu(nu);
}

double bullington_with_extension(const std::vector<ProfilePoint>& pts, double h_ts, double h_rs,
                                 double lambda, double a_e) {
    const double l_uc = bullington_uncorrected(pts, h_ts, h_rs, lambda, a_e);
    const double d_km = pts.back().distance_m / 1000.0;
    return l_uc + (1.0 - std::exp(-l_uc / 6.0)) * (10.0 + 0.02 * d_km);
}

}  // namespace

DiffractionDb bullington_loss(const TerrainProfile& profile, FrequencyGhz f,
                              const EffectiveEarth& earth) {
    const double loss =
        bullington_with_extension(profile.points(), profile.tx_antenna_amsl(),
                                  profile.rx_antenna_amsl(), f.wavelength_m(), earth.radius_m);
    return DiffractionDb{std::max(loss, 0.0)};
}

// --------------------------------------------------------------------------
// Spherical-Earth part (P.1812 sections 4.3.2/4.3.3 first term)
// --------------------------------------------------------------------------

DiffractionDb spherical_earth_loss(DistanceM d, FrequencyGhz f, double h_te_m, double h_re_m,
                                   const EffectiveEarth& earth) {
    if (!std::isfinite(h_te_m) || h_te_m <= 0.0 || !std::isfinite(h_re_m) || h_re_m <= 0.0)
        throw validation_error("spherical_earth_loss: effective antenna heights must be > 0");

    // Marginal line-of-sight distance over smooth Earth; at or inside it
    // there is no spherical-Earth diffraction loss.
    const double d_los = std::sqrt(2.0 * earth.radius_m) * (std::sqrt(h_te_m) + std::sqrt(h_re_m));
    if (d.value <= d_los) return DiffractionDb{0.0};

    const double f_ghz = f.value;
    const double a_km = earth.radius_m / 1000.0;
    const double d_km = d.value / 1000.0;

    // Normalized surface admittance, horizontal polarization.
    const double sigma_term = 18.0 * ground_conductivity_spm / f_ghz;
    const double eps_term = ground_rel_permittivity - 1.0;
    const double k_h = 0.036 * std::pow(a_km * f_ghz, -1.0 / 3.0) *
                       std::pow(eps_term * eps_term + sigma_term * sigma_term, -0.25);

    const double k2 = k_h * k_h;
    const double k4 = k2 * k2;
    const double beta = (1.0 + 1.6 * k2 + 0.67 * k4) / (1.0 + 4.5 * k2 + 1.53 * k4);

    const double x = 21.88 * beta * std::pow(f_ghz / (a_km * a_km), 1.0 / 3.0) * d_km;
    const double y_factor = 0.9575 * beta * std::pow(f_ghz * f_ghz / a_km, 1.0 / 3.0);

    const double fx = (x >= 1.6) ? 11.0 + 10.0 * std::log10(x) - 17.6 * x
                                 : -20.0 * std::log10(x) - 5.6488 * std::pow(x, 1.425);

    const auto g_of = [&](double h_m) {
        const double b = beta * (y_factor * h_m);
        double g;
        if (b > 2.0)
            g = 17.6 * std::sqrt(b - 1.1) - 5.0 * std::log10(b - 1.1) - 8.0;
        else
            g = 20.0 * std::log10(b + 0.1 * b * b * b);
        return std::max(g, 2.0 + 20.0 * std::log10(k_h));
    };

    const double loss = -fx - g_of(h_te_m) - g_of(h_re_m);
    return DiffractionDb{std::max(loss, 0.0)};
}

// --------------------------------------------------------------------------
// Smooth-surface effective heights (P.1812 section 5.6.1/5.6.2)
// --------------------------------------------------------------------------

EffectiveHeights effective_antenna_heights(const TerrainProfile& profile) {
    const auto& pts = profile.points();
    const double d = profile.total_distance_m();

    // Least-squares straight surface through the piecewise-linear terrain.
    double v1 = 0.0, v2 = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const double dd = pts[i].distance_m - pts[i - 1].distance_m;
        const double hi = pts[i].elevation_m;
        const double hp = pts[i - 1].elevation_m;
        v1 += dd * (hi + hp);
        v2 += dd * (hi * (2.0 * pts[i].distance_m + pts[i - 1].distance_m) +
                    hp * (pts[i].distance_m + 2.0 * pts[i - 1].distance_m));
    }
    double h_st = (2.0 * v1 * d - v2) / (d * d);
    double h_sr = (v2 - v1 * d) / (d * d);

    // The smooth surface must not rise above the actual ground at either
    // end of the path.
    h_st = std::min(h_st, pts.front().elevation_m);
    h_sr = std::min(h_sr, pts.back().elevation_m);

    // Clamp to 1 m to keep the spherical-Earth inputs non-degenerate.
    return EffectiveHeights{std::max(profile.tx_antenna_amsl() - h_st, 1.0),
                            std::max(profile.rx_antenna_amsl() - h_sr, 1.0)};
}

DiffractionDb delta_bullington(const TerrainProfile& profile, FrequencyGhz f,
                               const EffectiveEarth& earth) {
    const double lambda = f.wavelength_m();
    const double l_ba = bullington_with_extension(profile.points(), profile.tx_antenna_amsl(),
                                                  profile.rx_antenna_amsl(), lambda,
                                                  earth.radius_m);

    const auto eff = effective_antenna_heights(profile);

    // Smooth path: zero elevations, antennas at the effective heights.
    std::vector<ProfilePoint> smooth;
    smooth.reserve(profile.points().size());
    for (const auto& p : profile.points()) smooth.push_back({p.distance_m, 0.0});
    const double l_bs =
        bullington_with_extension(smooth, eff.h_te_m, eff.h_re_m, lambda, earth.radius_m);

    const double l_sph = spherical_earth_loss(DistanceM{profile.total_distance_m()}, f,
                                              eff.h_te_m, eff.h_re_m, earth)
                             .value;

    const double loss = l_ba + std::max(l_sph - l_bs, 0.0);
    return DiffractionDb{std::max(loss, 0.0)};
}

}  // namespace rfprop
