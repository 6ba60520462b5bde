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

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#ifndef _WIN32
#include <sys/wait.h>
#endif

#include "doctest.h"
#include "helpers.hpp"
#include "rfprop/report.hpp"

using testutil::TempDir;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

CliResult run_cli(const std::string& args, const TempDir& tmp) {
    const auto out_path = tmp.path / "cli_stdout.txt";
    const auto err_path = tmp.path / "cli_stderr.txt";
    const std::string cmd = std::string("\"") + RFPROP_CLI_PATH + "\" " + args + " >\"" +
                            out_path.string() + "\" 2>\"" + err_path.string() + "\"";
    const int status = std::system(cmd.c_str());
    CliResult r;
#ifdef _WIN32
    r.exit_code = status;
#else
    if (WIFEXITED(status)) r.exit_code = WEXITSTATUS(status);
#endif
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    return r;
}

// Extracts the numeric value on a `key   <value>` line of predict output.
double printed_value(const std::string& out, const std::string& key) {
    std::istringstream ss(out);
    std::string line;
    while (std::getline(ss, line)) {
        if (line.rfind(key, 0) != 0) continue;
        std::istringstream ls(line);
        std::string name;
        double v = 0.0;
        ls >> name >> v;
        return v;
    }
    FAIL(("missing line: " + key));
    return 0.0;
}

}  // namespace

TEST_CASE("cli help and argument errors") {
    TempDir tmp("rfprop_cli_help");
    CHECK(run_cli("--help", tmp).exit_code == 0);
    CHECK(run_cli("fit --help", tmp).exit_code == 0);
    CHECK(run_cli("", tmp).exit_code == 1);
    CHECK(run_cli("frobnicate", tmp).exit_code == 1);
    CHECK(run_cli("predict --freq-ghz 1.4", tmp).exit_code == 1);
}

TEST_CASE("cli predict prints the documented decomposition") {
    TempDir tmp("rfprop_cli_pred");

    const auto plain = run_cli("predict --freq-ghz 1.4 --dist-m 1000 --ple 2.16", tmp);
    REQUIRE(plain.exit_code == 0);
    CHECK(testutil::close(printed_value(plain.out, "intercept_db"), 35.322560713564755, 1e-3));
    CHECK(testutil::close(printed_value(plain.out, "predicted_pl_db"), 100.12256071356477,
                          1e-3));
    CHECK(printed_value(plain.out, "diffraction_term_db") == 0.0);

    const auto ske = run_cli(
        "predict --freq-ghz 1.4 --dist-m 1000 --ple 2.28 --alpha 0.87 --phi-db 20", tmp);
    REQUIRE(ske.exit_code == 0);
    CHECK(testutil::close(printed_value(ske.out, "predicted_pl_db"), 121.12256071356475, 1e-3));
    CHECK(testutil::close(printed_value(ske.out, "diffraction_term_db"), 17.4, 1e-3));

    const auto db = run_cli(
        "predict --freq-ghz 2.25 --dist-m 1000 --ple 2.26 --alpha 0.66 --phi-db 10", tmp);
    REQUIRE(db.exit_code == 0);
    CHECK(testutil::close(printed_value(db.out, "predicted_pl_db"), 113.84365036222724, 1e-3));

    // Distances below the 1 m reference are rejected.
    CHECK(run_cli("predict --freq-ghz 1.4 --dist-m 0.5 --ple 2.0", tmp).exit_code == 1);
    // --phi-db and --profile are mutually exclusive.
    CHECK(run_cli("predict --freq-ghz 1.4 --dist-m 10 --ple 2 --phi-db 1 --profile x", tmp)
              .exit_code == 1);
}

TEST_CASE("cli predict can take the link from a profile file") {
    TempDir tmp("rfprop_cli_predprof");
    const auto prof = tmp.path / "hill.profile";
    write_profile(testutil::hill_profile(5000.0, 2000.0, 60.0, 15.0, 2.0), prof);

    const auto r = run_cli("predict --freq-ghz 1.4 --ple 2.0 --alpha 1 --model ci+db --profile \"" +
                               prof.string() + "\"",
                           tmp);
    REQUIRE(r.exit_code == 0);
    CHECK(testutil::close(printed_value(r.out, "diffraction_term_db"), 35.77214701698166, 1e-3));
    // Distance defaults to the profile length (5 km).
    CHECK(testutil::close(printed_value(r.out, "distance_term_db"), 73.9794, 1e-3));

    CHECK(run_cli("predict --freq-ghz 1.4 --ple 2.0 --profile \"" + prof.string() +
                      "\" --model ci+ske",
                  tmp)
              .exit_code == 0);
}

TEST_CASE("cli synth, fit and plotdata form a working pipeline") {
    TempDir tmp("rfprop_cli_pipe");
    const auto campaign = tmp.path / "camp";

    const auto synth = run_cli(
        "synth --truth-ple 2.28 --truth-alpha 0.87 --sigma 4.6 --model ci+ske --n 400 "
        "--terrain rolling --seed 5 --dmin 10 --dmax 5000 --out \"" +
            campaign.string() + "\"",
        tmp);
    REQUIRE(synth.exit_code == 0);
    CHECK(std::filesystem::exists(campaign / "measurements.csv"));
    CHECK(std::filesystem::exists(campaign / "system.json"));
    CHECK(std::filesystem::is_directory(campaign / "profiles"));
    CHECK(synth.err.find("400 samples") != std::string::npos);

    const auto report_path = tmp.path / "report.json";
    const auto fit = run_cli("fit \"" + (campaign / "measurements.csv").string() +
                                 "\" --model all --out \"" + report_path.string() + "\"",
                             tmp);
    REQUIRE(fit.exit_code == 0);
    CHECK(fit.out.find("model") != std::string::npos);
    CHECK(fit.out.find("ci+ske") != std::string::npos);
    CHECK(fit.out.find("sigma_db") != std::string::npos);
    REQUIRE(std::filesystem::exists(report_path));

    const rfprop::FitReport report = rfprop::read_report(report_path);
    REQUIRE(report.rows.size() == 5);
    CHECK(report.frequency_ghz == 1.4);
    // The regressed single-knife-edge fit recovers the generating truth.
    CHECK(testutil::close(report.rows[2].ple, 2.28, 0.1));
    CHECK(testutil::close(report.rows[2].alpha, 0.87, 0.1));
    CHECK(testutil::close(report.rows[2].sigma_db, 4.6, 0.5));

    // Re-running the fit writes byte-identical output.
    const auto report2_path = tmp.path / "report2.json";
    REQUIRE(run_cli("fit \"" + (campaign / "measurements.csv").string() +
                        "\" --model all --out \"" + report2_path.string() + "\"",
                    tmp)
                .exit_code == 0);
    CHECK(slurp(report_path) == slurp(report2_path));

    const auto plot_path = tmp.path / "plot.tsv";
    const auto plot = run_cli("plotdata \"" + (campaign / "measurements.csv").string() + "\" \"" +
                                  report_path.string() + "\" --out \"" + plot_path.string() +
                                  "\"",
                              tmp);
    REQUIRE(plot.exit_code == 0);
    std::ifstream in(plot_path);
    std::string line;
    std::size_t rows = 0;
    while (std::getline(in, line))
        if (!line.empty() && line[0] != '#') ++rows;
    CHECK(rows == 400 + 50 * 5);
}

TEST_CASE("cli synth is deterministic in the seed") {
    TempDir tmp("rfprop_cli_det");
    const std::string base = "synth --truth-ple 2.2 --sigma 3 --model ci --n 60 --terrain flat "
                             "--dmin 10 --dmax 900 --seed 9 --out \"";
    REQUIRE(run_cli(base + (tmp.path / "a").string() + "\"", tmp).exit_code == 0);
    REQUIRE(run_cli(base + (tmp.path / "b").string() + "\"", tmp).exit_code == 0);
    CHECK(slurp(tmp.path / "a" / "measurements.csv") == slurp(tmp.path / "b" / "measurements.csv"));
    CHECK(slurp(tmp.path / "a" / "system.json") == slurp(tmp.path / "b" / "system.json"));
}

TEST_CASE("cli split reports are named by frequency and class") {
    TempDir tmp("rfprop_cli_split");
    const auto campaign = tmp.path / "camp";
    REQUIRE(run_cli("synth --truth-ple 2.3 --truth-alpha 0.8 --sigma 4 --model ci+ske --n 300 "
                    "--terrain rolling --seed 12 --dmin 10 --dmax 5000 --out \"" +
                        campaign.string() + "\"",
                    tmp)
                .exit_code == 0);

    const auto fit = run_cli("fit \"" + (campaign / "measurements.csv").string() +
                                 "\" --split-los --out \"" + (tmp.path / "r.json").string() +
                                 "\"",
                             tmp);
    REQUIRE(fit.exit_code == 0);
    CHECK(std::filesystem::exists(tmp.path / "r_1400MHz_LOS.json"));
    CHECK(std::filesystem::exists(tmp.path / "r_1400MHz_NLOS.json"));
    CHECK(rfprop::read_report(tmp.path / "r_1400MHz_LOS.json").los_class == "LOS");
    CHECK(rfprop::read_report(tmp.path / "r_1400MHz_NLOS.json").los_class == "NLOS");
}

TEST_CASE("cli exit codes distinguish failure classes") {
    TempDir tmp("rfprop_cli_codes");

    // I/O failure: the measurement file does not exist.
    CHECK(run_cli("fit \"" + (tmp.path / "nope.csv").string() + "\"", tmp).exit_code == 3);

    // Validation failure: malformed CSV.
    const auto bad = tmp.path / "bad.csv";
    std::ofstream(bad) << "id,x_m\np1,1\n";
    CHECK(run_cli("fit \"" + bad.string() + "\"", tmp).exit_code == 1);

    // Numerical failure: a flat short-range campaign has no diffraction
    // variance, so the joint fit has a singular system.
    const auto flat = tmp.path / "flat";
    REQUIRE(run_cli("synth --truth-ple 2.16 --sigma 2 --model ci --n 50 --terrain flat "
                    "--dmin 10 --dmax 900 --seed 3 --out \"" +
                        flat.string() + "\"",
                    tmp)
                .exit_code == 0);
    const auto joint = run_cli("fit \"" + (flat / "measurements.csv").string() +
                                   "\" --model ci+ske --alpha regress",
                               tmp);
    CHECK(joint.exit_code == 2);
    CHECK(joint.err.find("numerical error") != std::string::npos);

    // Frequency filter that matches nothing.
    CHECK(run_cli("fit \"" + (flat / "measurements.csv").string() + "\" --freq-mhz 2250", tmp)
              .exit_code == 1);
}

TEST_CASE("cli reads flag defaults from a config file") {
    TempDir tmp("rfprop_cli_config");
    const auto cfg = tmp.path / "defaults.ini";
    std::ofstream(cfg) << "[predict]\nfreq-ghz=1.4\nple=2.16\ndist-m=1000\n";

    const auto r = run_cli("--config \"" + cfg.string() + "\" predict", tmp);
    REQUIRE(r.exit_code == 0);
    CHECK(testutil::close(printed_value(r.out, "predicted_pl_db"), 100.12256071356477, 1e-3));

    // Command-line flags override config defaults.
    const auto o = run_cli("--config \"" + cfg.string() + "\" predict --ple 2.0", tmp);
    REQUIRE(o.exit_code == 0);
    CHECK(testutil::close(printed_value(o.out, "predicted_pl_db"), 95.32256071356476, 1e-3));

    CHECK(run_cli("--config \"" + (tmp.path / "nope.ini").string() + "\" predict", tmp)
              .exit_code == 1);
}
