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

#include "rfprop/report.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "rfprop/pathloss.hpp"
#include "text.hpp"

namespace rfprop {

using detail::append_shortest;

namespace {

// Compact row label used in tables and plot-data column names, e.g. "ci",
// "ci+ske_fixed1", "ci+db_regressed".
std::string row_label(const ModelKind& kind) {
    std::string label = to_string(kind.variant);
    if (kind.variant != ModelVariant::ci) label += "_" + to_string(kind.alpha_mode);
    return label;
}

std::string fixed3(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

bool near(double a, double b) { return std::abs(a - b) <= 1e-6 * std::max(1.0, std::abs(b)); }

}  // namespace

RegressionSample to_regression_sample(const MeasurementSample& s, ModelVariant variant) {
    RegressionSample r;
    r.x1 = 10.0 * std::log10(s.distance_m);
    r.y_hat = s.path_loss_db;
    r.a = ci_intercept_db(FrequencyGhz(s.freq_ghz));
    switch (variant) {
        case ModelVariant::ci: r.x2 = 0.0; break;
        case ModelVariant::ci_diff_ske:
            if (!s.phi_ske_db)
                throw validation_error("sample '" + s.id +
                                       "' lacks phi_ske_db; attach diffraction first");
            r.x2 = *s.phi_ske_db;
            break;
        case ModelVariant::ci_diff_db:
            if (!s.phi_db_db)
                throw validation_error("sample '" + s.id +
                                       "' lacks phi_db_db; attach diffraction first");
            r.x2 = *s.phi_db_db;
            break;
    }
    return r;
}

namespace {

std::vector<ModelKind> selected_kinds(const FitOptions& options) {
    if (!options.model) {
        return {ModelKind::ci(),
                ModelKind::diffraction(ModelVariant::ci_diff_ske, AlphaMode::fixed_one),
                ModelKind::diffraction(ModelVariant::ci_diff_ske, AlphaMode::regressed),
                ModelKind::diffraction(ModelVariant::ci_diff_db, AlphaMode::fixed_one),
                ModelKind::diffraction(ModelVariant::ci_diff_db, AlphaMode::regressed)};
    }
    if (*options.model == ModelVariant::ci) return {ModelKind::ci()};
    if (options.alpha == AlphaMode::not_applicable)
        throw validation_error("diffraction models need --alpha fixed1 or regress");
    return {ModelKind::diffraction(*options.model, options.alpha)};
}

FitRow fit_one(const std::vector<const MeasurementSample*>& block, const ModelKind& kind) {
    std::vector<RegressionSample> rs;
    rs.reserve(block.size());
    for (const MeasurementSample* s : block) rs.push_back(to_regression_sample(*s, kind.variant));

    FitResult res;
    if (kind.variant == ModelVariant::ci)
        res = fit_ci(rs);
    else if (kind.alpha_mode == AlphaMode::fixed_one)
        res = fit_ci_diffraction_fixed_alpha(rs, 1.0, kind.variant);
    else
        res = fit_ci_diffraction_joint(rs, kind.variant);

    FitRow row;
    row.kind = kind;
    row.ple = res.params.ple;
    row.alpha = kind.variant == ModelVariant::ci ? 0.0 : res.params.alpha;
    row.sigma_db = res.params.sigma_db;
    row.n = res.n_samples;
    return row;
}

std::string campaign_digest(const Campaign& campaign,
                            const std::vector<const MeasurementSample*>& block) {
    std::size_t los = 0, nlos = 0;
    for (const MeasurementSample* s : block) {
        if (!s->los) continue;
        (*s->los == LosClass::los ? los : nlos)++;
    }
    std::string d = "N=" + std::to_string(block.size());
    d += " LOS=" + std::to_string(los);
    d += " NLOS=" + std::to_string(nlos);
    d += " censored=" + std::to_string(campaign.censored_count);
    if (!campaign.provenance.empty()) d += " | " + campaign.provenance;
    return d;
}

}  // namespace

std::vector<FitReport> run_fits(const Campaign& campaign, const FitOptions& options) {
    if (campaign.samples.empty()) throw validation_error("campaign has no samples");

    std::vector<const MeasurementSample*> pool;
    pool.reserve(campaign.samples.size());
    for (const auto& s : campaign.samples) {
        if (options.freq_mhz && !near(s.freq_ghz * 1000.0, *options.freq_mhz)) continue;
        pool.push_back(&s);
    }
    if (pool.empty()) throw validation_error("no samples at the requested frequency");

    // One block per frequency in ascending order, or a single pooled block.
    std::vector<std::pair<double, std::vector<const MeasurementSample*>>> freq_blocks;
    if (options.pooled) {
        freq_blocks.push_back({0.0, pool});
        bool single = std::all_of(pool.begin(), pool.end(), [&](const MeasurementSample* s) {
            return near(s->freq_ghz, pool.front()->freq_ghz);
        });
        if (single) freq_blocks.back().first = pool.front()->freq_ghz;
    } else {
        std::vector<double> freqs;
        for (const MeasurementSample* s : pool)
            if (std::none_of(freqs.begin(), freqs.end(),
                             [&](double f) { return near(f, s->freq_ghz); }))
                freqs.push_back(s->freq_ghz);
        std::sort(freqs.begin(), freqs.end());
        for (double f : freqs) {
            freq_blocks.push_back({f, {}});
            for (const MeasurementSample* s : pool)
                if (near(s->freq_ghz, f)) freq_blocks.back().second.push_back(s);
        }
    }

    std::vector<ModelKind> kinds = selected_kinds(options);
    std::vector<FitReport> reports;
    for (auto& [freq, block] : freq_blocks) {
        std::vector<std::pair<std::string, std::vector<const MeasurementSample*>>> class_blocks;
        if (options.split_los) {
            std::vector<const MeasurementSample*> los_block, nlos_block;
            for (const MeasurementSample* s : block) {
                if (!s->los)
                    throw validation_error("sample '" + s->id +
                                           "' has no LOS class; attach diffraction first");
                (*s->los == LosClass::los ? los_block : nlos_block).push_back(s);
            }
            class_blocks.push_back({"LOS", std::move(los_block)});
            class_blocks.push_back({"NLOS", std::move(nlos_block)});
        } else {
            class_blocks.push_back({"all", block});
        }

        for (auto& [los_class, samples] : class_blocks) {
            if (samples.empty()) continue;
            FitReport report;
            report.campaign = campaign_digest(campaign, samples);
            report.frequency_ghz = freq;
            report.los_class = los_class;
            for (const ModelKind& kind : kinds) {
                if (!options.model && kind.alpha_mode == AlphaMode::regressed) {
                    // A block whose diffraction column is all zero (often the
                    // LOS class) has no regressed-alpha fit. The all-models
                    // survey drops that row and keeps the rest; an explicitly
                    // requested model still propagates the error.
                    try {
                        report.rows.push_back(fit_one(samples, kind));
                    } catch (const numerical_error&) {
                    }
                } else {
                    report.rows.push_back(fit_one(samples, kind));
                }
            }
            reports.push_back(std::move(report));
        }
    }
    if (reports.empty()) throw validation_error("no non-empty blocks to fit");
    return reports;
}

void write_report(const FitReport& report, const std::filesystem::path& path,
                  ReportFormat format) {
    if (report.rows.empty()) throw validation_error("report has no rows");
    std::ofstream f(path);
    if (!f) throw io_error("cannot write report: " + path.string());
    if (format == ReportFormat::table) {
        f << format_report_table(report);
    } else {
        nlohmann::ordered_json j;
        j["campaign"] = report.campaign;
        j["frequency_ghz"] = report.frequency_ghz;
        j["los_class"] = report.los_class;
        j["rows"] = nlohmann::ordered_json::array();
        for (const FitRow& r : report.rows) {
            j["rows"].push_back({{"model", to_string(r.kind.variant)},
                                 {"alpha_mode", to_string(r.kind.alpha_mode)},
                                 {"ple", r.ple},
                                 {"alpha", r.alpha},
                                 {"sigma_db", r.sigma_db},
                                 {"n", r.n}});
        }
        f << j.dump(2) << '\n';
    }
    if (!f) throw io_error("write failed: " + path.string());
}

FitReport read_report(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw io_error("cannot open report: " + path.string());
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception& e) {
        throw validation_error("malformed report " + path.string() + ": " + e.what());
    }
    FitReport report;
    try {
        report.campaign = j.at("campaign").get<std::string>();
        report.frequency_ghz = j.at("frequency_ghz").get<double>();
        report.los_class = j.at("los_class").get<std::string>();
        for (const auto& row : j.at("rows")) {
            FitRow r;
            r.kind.variant = model_variant_from_string(row.at("model").get<std::string>());
            r.kind.alpha_mode = alpha_mode_from_string(row.at("alpha_mode").get<std::string>());
            ModelKind::validate(r.kind);
            r.ple = row.at("ple").get<double>();
            r.alpha = row.at("alpha").get<double>();
            r.sigma_db = row.at("sigma_db").get<double>();
            r.n = row.at("n").get<std::size_t>();
            report.rows.push_back(std::move(r));
        }
    } catch (const nlohmann::json::exception& e) {
        throw validation_error("incomplete report " + path.string() + ": " + e.what());
    }
    if (report.rows.empty()) throw validation_error("report has no rows: " + path.string());
    return report;
}

std::string format_report_table(const FitReport& report) {
    if (report.rows.empty()) throw validation_error("report has no rows");
    std::string out = "campaign: " + report.campaign + "\n";
    out += "frequency_ghz: ";
    if (report.frequency_ghz > 0.0)
        append_shortest(out, report.frequency_ghz);
    else
        out += "mixed";
    out += "   los_class: " + report.los_class + "\n";

    std::vector<std::array<std::string, 6>> cells;
    cells.push_back({"model", "alpha_mode", "ple", "alpha", "sigma_db", "n"});
    for (const FitRow& r : report.rows) {
        bool ci = r.kind.variant == ModelVariant::ci;
        cells.push_back({to_string(r.kind.variant), to_string(r.kind.alpha_mode), fixed3(r.ple),
                         ci ? std::string("-") : fixed3(r.alpha), fixed3(r.sigma_db),
                         std::to_string(r.n)});
    }
    std::array<std::size_t, 6> width{};
    for (const auto& row : cells)
        for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
    for (const auto& row : cells) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += "  ";
            out += row[i];
            if (i + 1 < row.size()) out.append(width[i] - row[i].size(), ' ');
        }
        out += '\n';
    }
    return out;
}

void write_plotdata(const Campaign& campaign, const FitReport& report,
                    const std::filesystem::path& path) {
    if (report.rows.empty()) throw validation_error("report has no rows");
    if (!(report.frequency_ghz > 0.0))
        throw validation_error("plot data needs a per-frequency report");

    std::vector<const MeasurementSample*> block;
    for (const auto& s : campaign.samples) {
        if (!near(s.freq_ghz, report.frequency_ghz)) continue;
        if (report.los_class != "all") {
            if (!s.los)
                throw validation_error("sample '" + s.id +
                                       "' has no LOS class; attach diffraction first");
            if (to_string(*s.los) != report.los_class) continue;
        }
        block.push_back(&s);
    }
    if (block.empty())
        throw validation_error("report does not match the campaign: no samples at " +
                               detail::shortest(report.frequency_ghz) + " GHz / " +
                               report.los_class);

    std::string out = "# columns: log10_distance_m measured_pl_db";
    for (const FitRow& r : report.rows) {
        out += " pred_" + row_label(r.kind);
        out += " resid_" + row_label(r.kind);
    }
    out += "\n# samples n=" + std::to_string(block.size()) + "\n";

    for (const MeasurementSample* s : block) {
        append_shortest(out, std::log10(s->distance_m));
        out += '\t';
        append_shortest(out, s->path_loss_db);
        for (const FitRow& r : report.rows) {
            RegressionSample rs = to_regression_sample(*s, r.kind.variant);
            double pred = rs.a + r.ple * rs.x1 + r.alpha * rs.x2;
            out += '\t';
            append_shortest(out, pred);
            out += '\t';
            append_shortest(out, s->path_loss_db - pred);
        }
        out += '\n';
    }

    // Model curves: the distance-only mean A + 10 B log10(d); the
    // site-specific diffraction term has no single curve, so it is left
    // out, matching a scatter-plus-line plot.
    double d_max = 1.0;
    for (const MeasurementSample* s : block) d_max = std::max(d_max, s->distance_m);
    double a_db = ci_intercept_db(FrequencyGhz(report.frequency_ghz));
    constexpr int k_curve_points = 50;
    for (const FitRow& r : report.rows) {
        out += "# curve model=" + row_label(r.kind) +
               " n=" + std::to_string(k_curve_points) + "\n";
        out += "# columns: log10_distance_m pred_pl_db\n";
        for (int i = 0; i < k_curve_points; ++i) {
            double lg = std::log10(d_max) * static_cast<double>(i) / (k_curve_points - 1);
            append_shortest(out, lg);
            out += '\t';
            append_shortest(out, a_db + 10.0 * r.ple * lg);
            out += '\n';
        }
    }

    std::ofstream f(path);
    if (!f) throw io_error("cannot write plot data: " + path.string());
    f << out;
    if (!f) throw io_error("write failed: " + path.string());
}

}  // namespace rfprop
