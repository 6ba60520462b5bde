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

#include "rfprop/campaign.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>

#include <json.hpp>

#include "rfprop/pathloss.hpp"
#include "text.hpp"

namespace rfprop {

void validate(const SystemParams& p) {
    if (!std::isfinite(p.tx_power_dbm)) throw validation_error("tx_power_dbm must be finite");
    if (!std::isfinite(p.lna_gain_db)) throw validation_error("lna_gain_db must be finite");
    if (!std::isfinite(p.calibration_db)) throw validation_error("calibration_db must be finite");
    if (!(p.effective_rx_level_dbm > p.noise_floor_dbm))
        throw validation_error("effective_rx_level_dbm must exceed noise_floor_dbm");
    if (p.frequencies_mhz.empty()) throw validation_error("frequencies_mhz must not be empty");
    for (double f : p.frequencies_mhz)
        if (!(f > 0.0) || !std::isfinite(f))
            throw validation_error("frequencies_mhz entries must be positive and finite");
    if (!(p.tx_height_m > 0.0) || !(p.rx_height_m > 0.0))
        throw validation_error("antenna heights must be positive");
}

double derive_path_loss_db(double rx_power_dbm, const SystemParams& system) {
    if (!std::isfinite(rx_power_dbm)) throw validation_error("rx_power_dbm must be finite");
    return system.tx_power_dbm - rx_power_dbm + system.calibration_db;
}

// --------------------------------------------------------------------------
// CSV helpers
// --------------------------------------------------------------------------

namespace {

constexpr std::array<const char*, 6> k_required_columns = {
    "id", "x_m", "y_m", "distance_m", "freq_mhz", "rx_power_dbm"};
constexpr std::array<const char*, 3> k_optional_columns = {"phi_ske_db", "phi_db_db", "los"};

using detail::append_shortest;

std::string trimmed(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(trimmed(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(trimmed(cur));
    return fields;
}

double parse_double_field(const std::string& field, const char* name, std::size_t line_no) {
    double v = 0.0;
    auto res = std::from_chars(field.data(), field.data() + field.size(), v);
    if (res.ec != std::errc{} || res.ptr != field.data() + field.size())
        throw validation_error("line " + std::to_string(line_no) + ": cannot parse " + name +
                               " from '" + field + "'");
    if (!std::isfinite(v))
        throw validation_error("line " + std::to_string(line_no) + ": " + name + " is not finite");
    return v;
}

// Frequencies come from the file in MHz and must belong to the system's
// channel list; matching is by value, with a small relative slack so a
// round-tripped decimal still matches.
bool frequency_listed(double freq_mhz, const std::vector<double>& listed) {
    for (double f : listed)
        if (std::abs(freq_mhz - f) <= 1e-6 * std::max(1.0, std::abs(f))) return true;
    return false;
}

}  // namespace

Campaign load_campaign(const std::filesystem::path& measurements_csv,
                       const std::optional<std::filesystem::path>& profiles_dir,
                       const SystemParams& system) {
    validate(system);
    std::ifstream f(measurements_csv);
    if (!f) throw io_error("cannot open measurement file: " + measurements_csv.string());

    Campaign campaign;
    campaign.system = system;
    campaign.provenance = "loaded from " + measurements_csv.filename().string();

    bool header_seen = false;
    bool has_optional = false;
    std::string line;
    std::size_t line_no = 0;
    std::set<std::string> seen_ids;
    std::size_t total_rows = 0;

    while (std::getline(f, line)) {
        ++line_no;
        std::string stripped = trimmed(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        std::vector<std::string> fields = split_csv_line(stripped);

        if (!header_seen) {
            bool ok = fields.size() == k_required_columns.size() ||
                      fields.size() == k_required_columns.size() + k_optional_columns.size();
            if (ok)
                for (std::size_t i = 0; i < k_required_columns.size(); ++i)
                    ok = ok && fields[i] == k_required_columns[i];
            if (ok && fields.size() > k_required_columns.size())
                for (std::size_t i = 0; i < k_optional_columns.size(); ++i)
                    ok = ok && fields[k_required_columns.size() + i] == k_optional_columns[i];
            if (!ok)
                throw validation_error(
                    "line " + std::to_string(line_no) +
                    ": header must be id,x_m,y_m,distance_m,freq_mhz,rx_power_dbm"
                    "[,phi_ske_db,phi_db_db,los]");
            has_optional = fields.size() > k_required_columns.size();
            header_seen = true;
            continue;
        }

        std::size_t expected = k_required_columns.size() + (has_optional ? 3 : 0);
        if (fields.size() != expected)
            throw validation_error("line " + std::to_string(line_no) + ": expected " +
                                   std::to_string(expected) + " fields, got " +
                                   std::to_string(fields.size()));
        ++total_rows;

        MeasurementSample s;
        s.id = fields[0];
        if (s.id.empty())
            throw validation_error("line " + std::to_string(line_no) + ": empty sample id");
        if (s.id.find_first_of("/\\") != std::string::npos)
            throw validation_error("line " + std::to_string(line_no) +
                                   ": sample id must not contain path separators");
        if (!seen_ids.insert(s.id).second)
            throw validation_error("line " + std::to_string(line_no) + ": duplicate sample id '" +
                                   s.id + "'");
        s.x_m = parse_double_field(fields[1], "x_m", line_no);
        s.y_m = parse_double_field(fields[2], "y_m", line_no);

        if (fields[3].empty()) {
            // No recorded link distance: derive it from the planar position
            // (transmitter at the origin) plus the antenna height offset.
            double dh = system.tx_height_m - system.rx_height_m;
            s.distance_m = std::sqrt(s.x_m * s.x_m + s.y_m * s.y_m + dh * dh);
        } else {
            s.distance_m = parse_double_field(fields[3], "distance_m", line_no);
        }
        if (!(s.distance_m >= 1.0))
            throw validation_error("line " + std::to_string(line_no) +
                                   ": distance_m must be at least 1 m");

        double freq_mhz = parse_double_field(fields[4], "freq_mhz", line_no);
        if (!frequency_listed(freq_mhz, system.frequencies_mhz))
            throw validation_error("line " + std::to_string(line_no) + ": frequency " +
                                   fields[4] + " MHz is not in the system channel list");
        s.freq_ghz = freq_mhz / 1000.0;

        s.rx_power_dbm = parse_double_field(fields[5], "rx_power_dbm", line_no);

        if (has_optional) {
            if (!fields[6].empty()) s.phi_ske_db = parse_double_field(fields[6], "phi_ske_db", line_no);
            if (!fields[7].empty()) s.phi_db_db = parse_double_field(fields[7], "phi_db_db", line_no);
            if (!fields[8].empty()) s.los = los_class_from_string(fields[8]);
            if (s.phi_ske_db && *s.phi_ske_db < 0.0)
                throw validation_error("line " + std::to_string(line_no) +
                                       ": phi_ske_db must be non-negative");
            if (s.phi_db_db && *s.phi_db_db < 0.0)
                throw validation_error("line " + std::to_string(line_no) +
                                       ": phi_db_db must be non-negative");
        }

        if (s.rx_power_dbm < system.effective_rx_level_dbm) {
            ++campaign.censored_count;
            continue;
        }
        s.path_loss_db = derive_path_loss_db(s.rx_power_dbm, system);
        campaign.samples.push_back(std::move(s));
    }
    if (!header_seen) throw validation_error("measurement file has no header row");
    if (total_rows == 0) throw validation_error("measurement file has no data rows");
    if (campaign.samples.empty())
        throw validation_error("all " + std::to_string(campaign.censored_count) +
                               " rows fall below the effective reception level");

    // Pick up whatever profiles exist; each sample must be covered by a
    // profile or by precomputed diffraction columns.
    for (const auto& s : campaign.samples) {
        std::filesystem::path p;
        bool have_profile = false;
        if (profiles_dir) {
            p = *profiles_dir / (s.id + ".profile");
            have_profile = std::filesystem::exists(p);
        }
        if (have_profile) {
            campaign.profiles.emplace(s.id, read_profile(p));
        } else if (!(s.phi_ske_db && s.phi_db_db && s.los)) {
            throw validation_error("sample '" + s.id +
                                   "' has no terrain profile and no precomputed "
                                   "diffraction columns");
        }
    }
    return campaign;
}

void save_campaign(const Campaign& campaign, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw io_error("cannot create campaign directory: " + dir.string());

    bool any_optional = false;
    for (const auto& s : campaign.samples)
        if (s.phi_ske_db || s.phi_db_db || s.los) any_optional = true;

    std::string out = "id,x_m,y_m,distance_m,freq_mhz,rx_power_dbm";
    if (any_optional) out += ",phi_ske_db,phi_db_db,los";
    out += '\n';
    for (const auto& s : campaign.samples) {
        out += s.id;
        out += ',';
        append_shortest(out, s.x_m);
        out += ',';
        append_shortest(out, s.y_m);
        out += ',';
        append_shortest(out, s.distance_m);
        out += ',';
        append_shortest(out, s.freq_ghz * 1000.0);
        out += ',';
        append_shortest(out, s.rx_power_dbm);
        if (any_optional) {
            out += ',';
            if (s.phi_ske_db) append_shortest(out, *s.phi_ske_db);
            out += ',';
            if (s.phi_db_db) append_shortest(out, *s.phi_db_db);
            out += ',';
            if (s.los) out += to_string(*s.los);
        }
        out += '\n';
    }
    std::ofstream mf(dir / "measurements.csv");
    if (!mf) throw io_error("cannot write " + (dir / "measurements.csv").string());
    mf << out;
    if (!mf) throw io_error("write failed: " + (dir / "measurements.csv").string());

    if (!campaign.profiles.empty()) {
        std::filesystem::create_directories(dir / "profiles", ec);
        if (ec) throw io_error("cannot create profiles directory under " + dir.string());
        for (const auto& [id, profile] : campaign.profiles)
            write_profile(profile, dir / "profiles" / (id + ".profile"));
    }

    nlohmann::ordered_json j;
    j["system"] = {{"tx_power_dbm", campaign.system.tx_power_dbm},
                   {"lna_gain_db", campaign.system.lna_gain_db},
                   {"noise_floor_dbm", campaign.system.noise_floor_dbm},
                   {"effective_rx_level_dbm", campaign.system.effective_rx_level_dbm},
                   {"frequencies_mhz", campaign.system.frequencies_mhz},
                   {"tx_height_m", campaign.system.tx_height_m},
                   {"rx_height_m", campaign.system.rx_height_m},
                   {"calibration_db", campaign.system.calibration_db}};
    j["provenance"] = campaign.provenance;
    j["censored_count"] = campaign.censored_count;
    std::ofstream sf(dir / "system.json");
    if (!sf) throw io_error("cannot write " + (dir / "system.json").string());
    sf << j.dump(2) << '\n';
    if (!sf) throw io_error("write failed: " + (dir / "system.json").string());
}

namespace {

std::pair<SystemParams, std::string> parse_system_json(const std::filesystem::path& path,
                                                       std::size_t* censored_out) {
    std::ifstream f(path);
    if (!f) throw io_error("cannot open " + path.string());
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception& e) {
        throw validation_error("malformed " + path.string() + ": " + e.what());
    }
    SystemParams p;
    try {
        const auto& s = j.at("system");
        p.tx_power_dbm = s.at("tx_power_dbm").get<double>();
        p.lna_gain_db = s.at("lna_gain_db").get<double>();
        p.noise_floor_dbm = s.at("noise_floor_dbm").get<double>();
        p.effective_rx_level_dbm = s.at("effective_rx_level_dbm").get<double>();
        p.frequencies_mhz = s.at("frequencies_mhz").get<std::vector<double>>();
        p.tx_height_m = s.at("tx_height_m").get<double>();
        p.rx_height_m = s.at("rx_height_m").get<double>();
        p.calibration_db = s.at("calibration_db").get<double>();
        if (censored_out && j.contains("censored_count"))
            *censored_out = j.at("censored_count").get<std::size_t>();
        return {p, j.value("provenance", std::string{})};
    } catch (const nlohmann::json::exception& e) {
        throw validation_error("incomplete " + path.string() + ": " + e.what());
    }
}

}  // namespace

Campaign load_campaign_dir(const std::filesystem::path& dir) {
    std::size_t censored = 0;
    auto [system, provenance] = parse_system_json(dir / "system.json", &censored);
    std::optional<std::filesystem::path> profiles;
    if (std::filesystem::exists(dir / "profiles")) profiles = dir / "profiles";
    Campaign c = load_campaign(dir / "measurements.csv", profiles, system);
    c.provenance = provenance;
    c.censored_count += censored;
    return c;
}

std::optional<std::pair<SystemParams, std::string>> load_system_sidecar(
    const std::filesystem::path& measurements_csv) {
    std::filesystem::path sidecar = measurements_csv.parent_path() / "system.json";
    if (!std::filesystem::exists(sidecar)) return std::nullopt;
    return parse_system_json(sidecar, nullptr);
}

void attach_diffraction(Campaign& campaign, const EffectiveEarth& earth) {
    for (auto& s : campaign.samples) {
        auto it = campaign.profiles.find(s.id);
        if (it == campaign.profiles.end()) {
            // A sample that already carries all three derived fields counts
            // as attached; anything else cannot be completed.
            if (s.phi_ske_db && s.phi_db_db && s.los) continue;
            throw validation_error("no terrain profile for sample '" + s.id + "'");
        }
        const TerrainProfile& profile = it->second;
        FrequencyGhz f(s.freq_ghz);
        s.phi_ske_db = ske_diffraction(profile, f, earth).value;
        s.phi_db_db = delta_bullington(profile, f, earth).value;
        s.los = classify_los(profile, f, earth);
    }
}

std::string to_string(TerrainStyle s) {
    switch (s) {
        case TerrainStyle::flat: return "flat";
        case TerrainStyle::hill: return "hill";
        case TerrainStyle::rolling: return "rolling";
    }
    throw validation_error("unknown terrain style");
}

TerrainStyle terrain_style_from_string(const std::string& s) {
    if (s == "flat") return TerrainStyle::flat;
    if (s == "hill") return TerrainStyle::hill;
    if (s == "rolling") return TerrainStyle::rolling;
    throw validation_error("unknown terrain style '" + s + "' (expected flat, hill or rolling)");
}

// --------------------------------------------------------------------------
// Synthetic campaigns
// --------------------------------------------------------------------------

namespace {

constexpr double k_profile_spacing_m = 30.0;

// Distance grid for one path: regular spacing with exact endpoints.
std::vector<double> profile_distances(double total_m) {
    std::vector<double> d;
    d.push_back(0.0);
    for (double x = k_profile_spacing_m; x < total_m - 0.5 * k_profile_spacing_m;
         x += k_profile_spacing_m)
        d.push_back(x);
    d.push_back(total_m);
    return d;
}

struct Bump {
    double center_m;
    double sigma_m;
    double amplitude_m;
};

double bump_elevation(const std::vector<Bump>& bumps, double x) {
    double e = 0.0;
    for (const auto& b : bumps) {
        double t = (x - b.center_m) / b.sigma_m;
        e += b.amplitude_m * std::exp(-0.5 * t * t);
    }
    return e;
}

TerrainProfile make_profile(TerrainStyle style, double total_m, double tx_h, double rx_h,
                            std::mt19937_64& rng) {
    std::vector<double> grid = profile_distances(total_m);
    std::vector<ProfilePoint> pts;
    pts.reserve(grid.size());

    switch (style) {
        case TerrainStyle::flat: {
            for (double x : grid) pts.push_back({x, 0.0});
            break;
        }
        case TerrainStyle::hill: {
            // One triangular hill; apex height and position drawn per path.
            std::uniform_real_distribution<double> pos(0.3, 0.7);
            std::uniform_real_distribution<double> height(5.0, 60.0);
            double apex_x = pos(rng) * total_m;
            double apex_h = height(rng);
            for (double x : grid) {
                double h = x <= apex_x ? apex_h * (x / std::max(apex_x, 1e-9))
                                       : apex_h * ((total_m - x) / std::max(total_m - apex_x, 1e-9));
                pts.push_back({x, std::max(h, 0.0)});
            }
            break;
        }
        case TerrainStyle::rolling: {
            // A few Gaussian rises with widely varying amplitude, so the
            // obstruction depth differs strongly from path to path.
            std::uniform_int_distribution<int> count(2, 4);
            std::uniform_real_distribution<double> pos(0.15, 0.85);
            std::uniform_real_distribution<double> width(0.05, 0.20);
            std::uniform_real_distribution<double> amp(5.0, 75.0);
            int n = count(rng);
            std::vector<Bump> bumps;
            bumps.reserve(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) {
                Bump b;
                b.center_m = pos(rng) * total_m;
                b.sigma_m = std::max(width(rng) * total_m, 1.0);
                b.amplitude_m = amp(rng);
                bumps.push_back(b);
            }
            for (double x : grid) pts.push_back({x, bump_elevation(bumps, x)});
            break;
        }
    }
    // Ends are kept at ground level so the antennas stand on the terrain
    // the heights were specified against.
    pts.front().elevation_m = 0.0;
    pts.back().elevation_m = 0.0;
    return TerrainProfile(std::move(pts), tx_h, rx_h);
}

}  // namespace

Campaign synth_campaign(const ModelParams& truth, const ModelKind& kind, std::size_t n_samples,
                        std::pair<double, double> distance_range_m, double freq_ghz,
                        TerrainStyle style, std::uint64_t seed) {
    validate(truth);
    ModelKind::validate(kind);
    if (n_samples < 1) throw validation_error("n_samples must be at least 1");
    auto [lo, hi] = distance_range_m;
    if (!(lo >= 1.0) || !(hi > lo) || !std::isfinite(hi))
        throw validation_error("distance range must satisfy 1 <= lo < hi");
    FrequencyGhz f(freq_ghz);

    Campaign campaign;
    // Censoring is disabled for synthetic data: the generator is the ground
    // truth, and dropping its own deep fades would bias any recovery check.
    campaign.system.noise_floor_dbm = -300.0;
    campaign.system.effective_rx_level_dbm = -290.0;
    campaign.system.frequencies_mhz = {freq_ghz * 1000.0};

    {
        std::string p = "synthetic campaign: model=" + to_string(kind.variant);
        p += " truth_ple=";
        append_shortest(p, truth.ple);
        p += " truth_alpha=";
        append_shortest(p, truth.alpha);
        p += " truth_sigma_db=";
        append_shortest(p, truth.sigma_db);
        p += " n=" + std::to_string(n_samples);
        p += " freq_ghz=";
        append_shortest(p, freq_ghz);
        p += " terrain=" + to_string(style);
        p += " seed=" + std::to_string(seed);
        campaign.provenance = p;
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> log_d(std::log(lo), std::log(hi));
    EffectiveEarth earth{};
    double a_db = ci_intercept_db(f);

    campaign.samples.reserve(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i) {
        MeasurementSample s;
        char idbuf[24];
        std::snprintf(idbuf, sizeof(idbuf), "s%06zu", i);
        s.id = idbuf;
        s.distance_m = std::exp(log_d(rng));
        s.x_m = s.distance_m;
        s.y_m = 0.0;
        s.freq_ghz = freq_ghz;

        TerrainProfile profile = make_profile(style, s.distance_m, campaign.system.tx_height_m,
                                              campaign.system.rx_height_m, rng);
        s.phi_ske_db = ske_diffraction(profile, f, earth).value;
        s.phi_db_db = delta_bullington(profile, f, earth).value;
        s.los = classify_los(profile, f, earth);

        double phi = 0.0;
        if (kind.variant == ModelVariant::ci_diff_ske)
            phi = *s.phi_ske_db;
        else if (kind.variant == ModelVariant::ci_diff_db)
            phi = *s.phi_db_db;
        double mean_pl = a_db + 10.0 * truth.ple * std::log10(s.distance_m) + truth.alpha * phi;

        double shadow = 0.0;
        if (truth.sigma_db > 0.0) {
            std::normal_distribution<double> chi(0.0, truth.sigma_db);
            shadow = chi(rng);
        }
        s.path_loss_db = mean_pl + shadow;
        s.rx_power_dbm =
            campaign.system.tx_power_dbm + campaign.system.calibration_db - s.path_loss_db;

        campaign.profiles.emplace(s.id, std::move(profile));
        campaign.samples.push_back(std::move(s));
    }
    return campaign;
}

}  // namespace rfprop
