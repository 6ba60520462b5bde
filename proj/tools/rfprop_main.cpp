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
// Command line front end. Exit codes: 0 success, 1 validation error,
// 2 numerical error (singular fit), 3 I/O error. Messages go to standard
// error; data goes to files or standard output.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rfprop/campaign.hpp"
#include "rfprop/pathloss.hpp"
#include "rfprop/report.hpp"
#include "rfprop/terrain.hpp"

namespace {

using namespace rfprop;

struct FitArgs {
    std::string measurements;
    std::string profiles;
    std::string model = "all";
    std::string alpha = "regress";
    bool split_los = false;
    double freq_mhz = 0.0;
    bool have_freq = false;
    bool pooled = false;
    std::string out;
    std::string format = "json";
};

struct PredictArgs {
    double freq_ghz = 0.0;
    double dist_m = 0.0;
    bool have_dist = false;
    double ple = 0.0;
    double alpha = 1.0;
    double phi_db = 0.0;
    bool have_phi = false;
    std::string profile;
    std::string model = "ci+ske";
};

struct SynthArgs {
    double truth_ple = 2.0;
    double truth_alpha = 0.0;
    double sigma = 0.0;
    std::string model = "ci";
    std::size_t n = 0;
    std::string terrain = "flat";
    std::uint64_t seed = 1;
    std::string out;
    double freq_ghz = 1.4;
    double dmin = 1.0;
    double dmax = 12500.0;
};

struct PlotArgs {
    std::string measurements;
    std::string report;
    std::string out;
};

// Campaign directories as written by the synth subcommand keep their
// profiles in a sibling `profiles/` directory; pick that up when no
// explicit directory was given.
std::optional<std::filesystem::path> resolve_profiles(const std::filesystem::path& measurements,
                                                      const std::string& explicit_dir) {
    if (!explicit_dir.empty()) return std::filesystem::path(explicit_dir);
    std::filesystem::path sibling = measurements.parent_path() / "profiles";
    if (std::filesystem::is_directory(sibling)) return sibling;
    return std::nullopt;
}

Campaign load_with_sidecar(const std::filesystem::path& measurements,
                           const std::optional<std::filesystem::path>& profiles) {
    SystemParams system;
    std::string provenance;
    if (auto sidecar = load_system_sidecar(measurements)) {
        system = sidecar->first;
        provenance = sidecar->second;
    }
    Campaign campaign = load_campaign(measurements, profiles, system);
    if (!provenance.empty()) campaign.provenance = provenance;
    for (double f_mhz : system.frequencies_mhz) {
        FrequencyGhz f(f_mhz / 1000.0);
        if (!f.within_documented_range())
            std::cerr << "warning: " << f.value
                      << " GHz is outside the documented 0.5-100 GHz model range\n";
    }
    return campaign;
}

std::string freq_tag_mhz(double freq_ghz) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", freq_ghz * 1000.0);
    return buf;
}

int cmd_fit(const FitArgs& args) {
    Campaign campaign =
        load_with_sidecar(args.measurements, resolve_profiles(args.measurements, args.profiles));
    attach_diffraction(campaign);

    FitOptions options;
    if (args.model != "all") options.model = model_variant_from_string(args.model);
    options.alpha = args.alpha == "fixed1" ? AlphaMode::fixed_one : AlphaMode::regressed;
    options.split_los = args.split_los;
    if (args.have_freq) options.freq_mhz = args.freq_mhz;
    options.pooled = args.pooled;

    std::vector<FitReport> reports = run_fits(campaign, options);
    for (std::size_t i = 0; i < reports.size(); ++i) {
        if (i) std::cout << '\n';
        std::cout << format_report_table(reports[i]);
    }

    if (!args.out.empty()) {
        ReportFormat fmt = args.format == "table" ? ReportFormat::table : ReportFormat::json;
        std::filesystem::path out(args.out);
        if (reports.size() == 1) {
            write_report(reports.front(), out, fmt);
            std::cerr << "wrote " << out.string() << '\n';
        } else {
            for (const FitReport& r : reports) {
                std::filesystem::path p = out.parent_path();
                std::string name = out.stem().string() + "_" + freq_tag_mhz(r.frequency_ghz) +
                                   "MHz";
                if (r.los_class != "all") name += "_" + r.los_class;
                name += out.extension().string();
                write_report(r, p / name, fmt);
                std::cerr << "wrote " << (p / name).string() << '\n';
            }
        }
    }
    return 0;
}

int cmd_predict(const PredictArgs& args) {
    FrequencyGhz f(args.freq_ghz);
    if (!f.within_documented_range())
        std::cerr << "warning: " << f.value
                  << " GHz is outside the documented 0.5-100 GHz model range\n";

    DiffractionDb phi;
    double dist_m = args.dist_m;
    if (!args.profile.empty()) {
        TerrainProfile profile = read_profile(args.profile);
        ModelVariant variant = model_variant_from_string(args.model);
        EffectiveEarth earth{};
        if (variant == ModelVariant::ci_diff_ske)
            phi = ske_diffraction(profile, f, earth);
        else if (variant == ModelVariant::ci_diff_db)
            phi = delta_bullington(profile, f, earth);
        else
            throw validation_error("--profile needs --model ci+ske or ci+db");
        if (!args.have_dist) dist_m = profile.total_distance_m();
    } else if (args.have_phi) {
        phi = DiffractionDb(args.phi_db);
    }
    if (!(args.have_dist || !args.profile.empty()))
        throw validation_error("predict needs --dist-m or --profile");

    ModelParams params;
    params.ple = args.ple;
    params.alpha = args.alpha;
    DistanceM d(dist_m);
    double total = ci_diff_predict_db(f, d, phi, params);
    double intercept = ci_intercept_db(f);
    double dist_term = 10.0 * args.ple * std::log10(dist_m);

    std::printf("intercept_db          %.3f\n", intercept);
    std::printf("distance_term_db      %.3f\n", dist_term);
    std::printf("diffraction_term_db   %.3f\n", args.alpha * phi.value);
    std::printf("predicted_pl_db       %.3f\n", total);
    return 0;
}

int cmd_synth(const SynthArgs& args) {
    ModelParams truth;
    truth.ple = args.truth_ple;
    truth.alpha = args.truth_alpha;
    truth.sigma_db = args.sigma;

    ModelVariant variant = model_variant_from_string(args.model);
    ModelKind kind = variant == ModelVariant::ci
                         ? ModelKind::ci()
                         : ModelKind::diffraction(variant, AlphaMode::regressed);

    Campaign campaign = synth_campaign(truth, kind, args.n, {args.dmin, args.dmax}, args.freq_ghz,
                                       terrain_style_from_string(args.terrain), args.seed);
    save_campaign(campaign, args.out);
    std::size_t nlos = 0;
    for (const auto& s : campaign.samples)
        if (s.los && *s.los == LosClass::nlos) ++nlos;
    std::cerr << "wrote " << campaign.samples.size() << " samples (" << nlos << " NLOS) to "
              << args.out << '\n';
    return 0;
}

int cmd_plotdata(const PlotArgs& args) {
    Campaign campaign =
        load_with_sidecar(args.measurements, resolve_profiles(args.measurements, ""));
    attach_diffraction(campaign);
    FitReport report = read_report(args.report);
    write_plotdata(campaign, report, args.out);
    std::cerr << "wrote " << args.out << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"close-in path loss modelling with terrain diffraction"};
    app.require_subcommand(1);
    app.set_config("--config", "", "read flag defaults from a key=value file");

    FitArgs fit_args;
    CLI::App* fit = app.add_subcommand("fit", "fit model parameters to a measurement campaign");
    fit->add_option("measurements", fit_args.measurements, "measurement CSV file")->required();
    fit->add_option("profiles", fit_args.profiles, "terrain profile directory");
    fit->add_option("--model", fit_args.model, "model to fit")
        ->check(CLI::IsMember({"ci", "ci+ske", "ci+db", "all"}));
    fit->add_option("--alpha", fit_args.alpha, "diffraction coefficient handling")
        ->check(CLI::IsMember({"fixed1", "regress"}));
    fit->add_flag("--split-los", fit_args.split_los, "fit LOS and NLOS classes separately");
    CLI::Option* freq_opt =
        fit->add_option("--freq-mhz", fit_args.freq_mhz, "restrict to one frequency");
    fit->add_flag("--pooled", fit_args.pooled, "one mixed-frequency fit with per-sample intercepts");
    fit->add_option("--out", fit_args.out, "report output path");
    fit->add_option("--format", fit_args.format, "report file format")
        ->check(CLI::IsMember({"json", "table"}));

    PredictArgs predict_args;
    CLI::App* predict = app.add_subcommand("predict", "predict path loss for one link");
    predict->add_option("--freq-ghz", predict_args.freq_ghz, "carrier frequency in GHz")
        ->required();
    CLI::Option* dist_opt =
        predict->add_option("--dist-m", predict_args.dist_m, "TX-RX distance in meters");
    predict->add_option("--ple", predict_args.ple, "path loss exponent")->required();
    predict->add_option("--alpha", predict_args.alpha, "diffraction coefficient (default 1)");
    CLI::Option* phi_opt =
        predict->add_option("--phi-db", predict_args.phi_db, "precomputed diffraction loss in dB");
    CLI::Option* profile_opt =
        predict->add_option("--profile", predict_args.profile, "terrain profile file");
    profile_opt->excludes(phi_opt);
    predict->add_option("--model", predict_args.model, "diffraction model for --profile")
        ->check(CLI::IsMember({"ci+ske", "ci+db"}));

    SynthArgs synth_args;
    CLI::App* synth = app.add_subcommand("synth", "generate a synthetic ground-truth campaign");
    synth->add_option("--truth-ple", synth_args.truth_ple, "ground-truth path loss exponent")
        ->required();
    synth->add_option("--truth-alpha", synth_args.truth_alpha, "ground-truth diffraction coefficient");
    synth->add_option("--sigma", synth_args.sigma, "shadow fading STD in dB");
    synth->add_option("--model", synth_args.model, "generating model")
        ->check(CLI::IsMember({"ci", "ci+ske", "ci+db"}));
    synth->add_option("--n", synth_args.n, "number of samples")->required();
    synth->add_option("--terrain", synth_args.terrain, "terrain style")
        ->check(CLI::IsMember({"flat", "hill", "rolling"}));
    synth->add_option("--seed", synth_args.seed, "RNG seed");
    synth->add_option("--out", synth_args.out, "output campaign directory")->required();
    synth->add_option("--freq-ghz", synth_args.freq_ghz, "carrier frequency in GHz");
    synth->add_option("--dmin", synth_args.dmin, "minimum distance in meters");
    synth->add_option("--dmax", synth_args.dmax, "maximum distance in meters");

    PlotArgs plot_args;
    CLI::App* plot = app.add_subcommand("plotdata", "export plot-ready model and sample columns");
    plot->add_option("measurements", plot_args.measurements, "measurement CSV file")->required();
    plot->add_option("report", plot_args.report, "fitted report JSON")->required();
    plot->add_option("--out", plot_args.out, "output data file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 1;
    }

    try {
        fit_args.have_freq = freq_opt->count() > 0;
        predict_args.have_dist = dist_opt->count() > 0;
        predict_args.have_phi = phi_opt->count() > 0;
        if (fit->parsed()) return cmd_fit(fit_args);
        if (predict->parsed()) return cmd_predict(predict_args);
        if (synth->parsed()) return cmd_synth(synth_args);
        if (plot->parsed()) return cmd_plotdata(plot_args);
    } catch (const validation_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const numerical_error& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 2;
    } catch (const io_error& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return 3;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
