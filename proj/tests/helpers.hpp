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
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "rfprop/terrain.hpp"

namespace testutil {

inline bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

// Flat profile at elevation zero, regular spacing, exact end point.
inline rfprop::TerrainProfile flat_profile(double total_m, double tx_h, double rx_h,
                                           double spacing_m = 30.0) {
    std::vector<rfprop::ProfilePoint> pts;
    for (double x = 0.0; x < total_m; x += spacing_m) pts.push_back({x, 0.0});
    pts.push_back({total_m, 0.0});
    return rfprop::TerrainProfile(std::move(pts), tx_h, rx_h);
}

// Triangular hill with apex (apex_x, apex_h), ground at zero at both ends.
inline rfprop::TerrainProfile hill_profile(double total_m, double apex_x, double apex_h,
                                           double tx_h, double rx_h, double spacing_m = 30.0) {
    std::vector<rfprop::ProfilePoint> pts;
    for (double x = 0.0; x < total_m; x += spacing_m) {
        double h = x <= apex_x ? apex_h * x / apex_x : apex_h * (total_m - x) / (total_m - apex_x);
        pts.push_back({x, h});
    }
    pts.push_back({total_m, 0.0});
    pts.front().elevation_m = 0.0;
    return rfprop::TerrainProfile(std::move(pts), tx_h, rx_h);
}

// Unique scratch directory under the system temp dir; removed by the
// destructor so tests do not leak files.
struct TempDir {
    std::filesystem::path path;

    explicit TempDir(const std::string& tag) {
        path = std::filesystem::temp_directory_path() /
               (tag + "_" + std::to_string(std::rand()) + std::to_string(std::rand()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
};

}  // namespace testutil
