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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rfprop/campaign.hpp"
#include "rfprop/regression.hpp"
#include "rfprop/types.hpp"

namespace rfprop {

// One fitted model, one line of the summary table.
struct FitRow {
    ModelKind kind;
    double ple = 0.0;
    double alpha = 0.0;  // 0 for the plain CI model
    double sigma_db = 0.0;
    std::size_t n = 0;
};

// Fit results for one campaign block (one frequency and one LOS class, or
// the whole campaign). los_class is "LOS", "NLOS" or "all"; frequency_ghz
// is 0 for a pooled mixed-frequency fit.
struct FitReport {
    std::string campaign;
    double frequency_ghz = 0.0;
    std::string los_class = "all";
    std::vector<FitRow> rows;
};

enum class ReportFormat { json, table };

// Serializes a report. The JSON document has exactly the fields
// {campaign, frequency_ghz, los_class, rows:[{model, alpha_mode, ple,
// alpha, sigma_db, n}]}; the table format is the human-readable rendering
// of format_report_table. A report with no rows is an error.
void write_report(const FitReport& report, const std::filesystem::path& path,
                  ReportFormat format = ReportFormat::json);
FitReport read_report(const std::filesystem::path& path);

std::string format_report_table(const FitReport& report);

// Which fits to run over a campaign.
struct FitOptions {
    std::optional<ModelVariant> model;        // nullopt: all five Table rows
    AlphaMode alpha = AlphaMode::regressed;   // for a single diffraction model
    bool split_los = false;                   // separate LOS / NLOS blocks
    std::optional<double> freq_mhz;           // restrict to one frequency
    bool pooled = false;                      // one mixed-frequency fit
};

// Builds the regression sample for one measurement under a model variant:
// x1 = 10 log10(d), x2 = the variant's diffraction loss, a = the
// frequency's 1 m intercept. Requires attached diffraction for the
// variants that use it.
RegressionSample to_regression_sample(const MeasurementSample& s, ModelVariant variant);

// Runs the selected fits per frequency (and per LOS class when split) and
// returns one report per block, deterministically ordered by frequency
// then LOS class. Blocks with no samples are skipped; if nothing remains,
// that is an error.
std::vector<FitReport> run_fits(const Campaign& campaign, const FitOptions& options);

// Emits plot-ready columns: one row per sample (log10 distance, measured
// path loss, per-model prediction and residual) followed, per model row,
// by a 50-point curve of the distance-only model mean A + 10 B log10(d)
// sampled log-uniformly from 1 m to the block's maximum distance. The
// report's frequency and LOS class select the matching campaign subset; an
// empty selection is a mismatch error.
void write_plotdata(const Campaign& campaign, const FitReport& report,
                    const std::filesystem::path& path);

}  // namespace rfprop
