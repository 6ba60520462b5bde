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

#include "rfprop/terrain.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "text.hpp"

namespace rfprop {

TerrainProfile::TerrainProfile(std::vector<ProfilePoint> points, double tx_height_m,
                               double rx_height_m)
    : points_(std::move(points)), tx_height_m_(tx_height_m), rx_height_m_(rx_height_m) {
    if (points_.size() < 2)
        throw validation_error("terrain profile needs at least two points");
    if (points_.front().distance_m != 0.0)
        throw validation_error("terrain profile must start at distance 0");
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (!std::isfinite(points_[i].distance_m) || !std::isfinite(points_[i].elevation_m))
            throw validation_error("terrain profile contains non-finite values");
        if (i > 0 && points_[i].distance_m <= points_[i - 1].distance_m)
            throw validation_error("terrain profile distances must be strictly increasing");
    }
    if (!std::isfinite(tx_height_m_) || tx_height_m_ <= 0.0 || !std::isfinite(rx_height_m_) ||
        rx_height_m_ <= 0.0)
        throw validation_error("antenna heights must be positive");
}

double TerrainProfile::ray_height_amsl(double distance_m) const {
    const double d = total_distance_m();
    const double h_ts = tx_antenna_amsl();
    const double h_rs = rx_antenna_amsl();
    return h_ts + (h_rs - h_ts) * (distance_m / d);
}

std::string to_string(LosClass c) { return c == LosClass::los ? "LOS" : "NLOS"; }

LosClass los_class_from_string(const std::string& s) {
    if (s == "LOS") return LosClass::los;
    if (s == "NLOS") return LosClass::nlos;
    throw validation_error("unknown LOS class: " + s);
}

double earth_bulge_m(double d1_m, double d2_m, const EffectiveEarth& earth) {
    return d1_m * d2_m / (2.0 * earth.radius_m);
}

LosClass classify_los(const TerrainProfile& profile, FrequencyGhz f, const EffectiveEarth& earth,
                      LosCriterion criterion) {
    const auto& pts = profile.points();
    const double d = profile.total_distance_m();
    const double lambda = f.wavelength_m();
    for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
        const double d1 = pts[i].distance_m;
        const double d2 = d - d1;
        const double terrain = pts[i].elevation_m + earth_bulge_m(d1, d2, earth);
        const double ray = profile.ray_height_amsl(d1);
        double required_clearance = 0.0;
        if (criterion == LosCriterion::fresnel_zone_60)
            required_clearance = 0.6 * std::sqrt(lambda * d1 * d2 / d);
        if (terrain > ray - required_clearance) return LosClass::nlos;
    }
    return LosClass::los;
}

// --------------------------------------------------------------------------
// Profile file I/O
// --------------------------------------------------------------------------

using detail::append_shortest;

TerrainProfile read_profile(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open profile file: " + path.string());

    std::string line;
    if (!std::getline(in, line)) throw validation_error("empty profile file: " + path.string());

    double tx_h = 0.0, rx_h = 0.0;
    if (std::sscanf(line.c_str(), "# tx_height_m=%lf rx_height_m=%lf", &tx_h, &rx_h) != 2)
        throw validation_error("profile " + path.string() +
                               ": missing `# tx_height_m=<v> rx_height_m=<v>` header");

    std::vector<ProfilePoint> pts;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        ProfilePoint p;
        if (!(ss >> p.distance_m >> p.elevation_m))
            throw validation_error("profile " + path.string() + ": bad point at line " +
                                   std::to_string(line_no));
        pts.push_back(p);
    }
    return TerrainProfile(std::move(pts), tx_h, rx_h);
}

void write_profile(const TerrainProfile& profile, const std::filesystem::path& path) {
    std::string out = "# tx_height_m=";
    append_shortest(out, profile.tx_height_m());
    out += " rx_height_m=";
    append_shortest(out, profile.rx_height_m());
    out += '\n';
    for (const auto& p : profile.points()) {
        append_shortest(out, p.distance_m);
        out += '\t';
        append_shortest(out, p.elevation_m);
        out += '\n';
    }
    std::ofstream f(path);
    if (!f) throw io_error("cannot write profile file: " + path.string());
    f << out;
    if (!f) throw io_error("write failed: " + path.string());
}

}  // namespace rfprop
