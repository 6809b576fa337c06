// SPDX-License-Identifier: Apache-2.0
//
// nrcsim - multi-user massive MIMO downlink performance under channel
// non-reciprocity and imperfect CSI
// Copyright (C) 2026 the nrcsim authors
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
// Command-line front end. Subcommands:
//   analytic     closed-form sweep
//   mc           Monte Carlo sweep
//   compare      both engines plus a maximum-deviation report
//   sensitivity  per-statistic degradation sweeps (others held at zero)
//   kopt         optimal scheduled user count vs. NRC level
//   max-nrc      maximum tolerable NRC level vs. target SINR
//   asymptote    N sweep with large-N saturation reference rows
//
// Exit codes: 0 success, 1 usage, 2 config parse/validation, 3 runtime.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include <CLI11.hpp>

#include <nrcsim/nrcsim.hpp>

namespace {

struct Options {
    std::string config_path;
    std::string out_path = "nrcsim_out.csv";
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> realizations;
    unsigned threads = 0;
    bool freeze_nrc = false;
    std::vector<double> target_sinr_db;
    std::vector<double> rho_d_db_points;
};

void add_common(CLI::App *cmd, Options &opt)
{
    cmd->add_option("--config", opt.config_path, "JSON run configuration")->required();
    cmd->add_option("--out", opt.out_path, "output CSV path (manifest lands next to it)");
    cmd->add_option("--seed", opt.seed, "master seed override");
    cmd->add_option("--realizations", opt.realizations, "Monte Carlo realization count override");
    cmd->add_option("--threads", opt.threads,
                    "worker threads, 0 = auto (NRCSIM_THREADS env, then hardware)");
    cmd->add_flag("--freeze-nrc", opt.freeze_nrc,
                  "hold a single NRC draw across all realizations (sensitivity studies; "
                  "estimates are then conditional on that draw)");
}

nrcsim::SweepSpec build_spec(const nrcsim::ParsedConfig &parsed, const Options &opt)
{
    nrcsim::SweepSpec spec = parsed.sweep;
    if (opt.seed)
        spec.seed = *opt.seed;
    if (opt.realizations)
        spec.mc_realizations = *opt.realizations;
    spec.threads = opt.threads;
    spec.freeze_nrc = opt.freeze_nrc;
    return spec;
}

nlohmann::json resolved_with_overrides(const nrcsim::ParsedConfig &parsed,
                                       const nrcsim::SweepSpec &spec)
{
    nlohmann::json j = parsed.resolved;
    j["sweep"]["seed"] = spec.seed;
    j["sweep"]["mc_realizations"] = spec.mc_realizations;
    return j;
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

void finish(const std::string &command, const nrcsim::ParsedConfig &parsed,
            const nrcsim::SweepSpec &spec, const Options &opt, const std::string &content,
            std::size_t rows, const Timer &timer)
{
    nrcsim::write_file(opt.out_path, content);
    nrcsim::RunManifest manifest;
    manifest.command = command;
    manifest.resolved_config = resolved_with_overrides(parsed, spec);
    manifest.seed = spec.seed;
    manifest.duration_seconds = timer.seconds();
    manifest.csv_checksum = nrcsim::checksum_string(content);
    manifest.csv_rows = rows;
    nrcsim::write_manifest(opt.out_path, manifest);
    std::printf("wrote %zu rows to %s (%s)\n", rows, opt.out_path.c_str(),
                manifest.csv_checksum.c_str());
}

// Largest per-antenna |SINR_mc - SINR_analytic| over all grid points.
void report_deviation(const std::vector<nrcsim::SweepRow> &rows)
{
    std::map<std::tuple<double, std::string, std::string>, double> analytic_db;
    for (const auto &r : rows)
        if (r.engine == "analytic" && r.sinr_db && r.antenna != "mean" && r.antenna != "sum")
            analytic_db[{r.value, nrcsim::to_string(r.precoder), r.antenna}] = *r.sinr_db;
    double worst = 0.0;
    const nrcsim::SweepRow *worst_row = nullptr;
    for (const auto &r : rows) {
        if (r.engine != "mc" || !r.sinr_db || r.antenna == "mean" || r.antenna == "sum")
            continue;
        auto it = analytic_db.find({r.value, nrcsim::to_string(r.precoder), r.antenna});
        if (it == analytic_db.end())
            continue;
        const double dev = std::fabs(*r.sinr_db - it->second);
        if (dev >= worst) {
            worst = dev;
            worst_row = &r;
        }
    }
    if (worst_row)
        std::printf("max |SINR_mc - SINR_analytic| = %.4f dB (%s=%g, %s, antenna %s)\n", worst,
                    worst_row->variable.c_str(), worst_row->value,
                    nrcsim::to_string(worst_row->precoder), worst_row->antenna.c_str());
    else
        std::printf("max |SINR_mc - SINR_analytic| = n/a (no paired rows)\n");
}

int run(const std::string &command, const Options &opt)
{
    Timer timer;
    const nrcsim::ParsedConfig parsed = nrcsim::parse_config(opt.config_path);
    nrcsim::SweepSpec spec = build_spec(parsed, opt);

    if (command == "analytic" || command == "mc" || command == "compare") {
        if (command == "analytic")
            spec.engines = {nrcsim::Engine::analytic};
        else if (command == "mc")
            spec.engines = {nrcsim::Engine::mc};
        else
            spec.engines = {nrcsim::Engine::analytic, nrcsim::Engine::mc};
        const auto rows = nrcsim::run_sweep(spec);
        finish(command, parsed, spec, opt, nrcsim::format_csv(rows), rows.size(), timer);
        if (command == "compare")
            report_deviation(rows);
        return 0;
    }
    if (command == "sensitivity") {
        const auto rows = nrcsim::run_single_param_sensitivity(spec);
        finish(command, parsed, spec, opt, nrcsim::format_csv(rows), rows.size(), timer);
        return 0;
    }
    if (command == "kopt") {
        const auto rows = nrcsim::run_kopt_study(spec);
        finish(command, parsed, spec, opt, nrcsim::format_kopt_csv(rows), rows.size(), timer);
        return 0;
    }
    if (command == "max-nrc") {
        std::vector<double> targets = opt.target_sinr_db;
        if (targets.empty())
            targets = {0.0, 3.0, 6.0, 9.0, 12.0, 15.0, 18.0};
        std::vector<double> rho_points;
        for (double db : opt.rho_d_db_points)
            rho_points.push_back(nrcsim::db_to_linear(db));
        if (rho_points.empty())
            rho_points = {1.0, 100.0};
        const auto rows = nrcsim::run_max_nrc_study(spec, targets, rho_points);
        for (const auto &r : rows) {
            if (r.feasible)
                std::printf("%s rho_d=%.1f dB target=%.1f dB -> max NRC level %.2f dB "
                            "(SINR %.4f dB)\n",
                            nrcsim::to_string(r.precoder), nrcsim::linear_to_db(r.rho_d),
                            r.target_sinr_db, r.max_level_db, r.achieved_sinr_db);
            else
                std::printf("%s rho_d=%.1f dB target=%.1f dB -> infeasible (exceeds the "
                            "zero-NRC SINR)\n",
                            nrcsim::to_string(r.precoder), nrcsim::linear_to_db(r.rho_d),
                            r.target_sinr_db);
        }
        finish(command, parsed, spec, opt, nrcsim::format_max_nrc_csv(rows), rows.size(), timer);
        return 0;
    }
    if (command == "asymptote") {
        if (spec.variable != nrcsim::SweepVariable::n_bs)
            throw nrcsim::RangeError("asymptote: config sweep.variable must be n_bs");
        const auto rows = nrcsim::run_asymptote_sweep(spec);
        finish(command, parsed, spec, opt, nrcsim::format_csv(rows), rows.size(), timer);
        return 0;
    }
    throw nrcsim::RangeError("unknown command: " + command);
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"nrcsim: closed-form and Monte Carlo downlink performance of multi-user "
                 "massive MIMO under channel non-reciprocity and imperfect CSI"};
    app.require_subcommand(1);

    Options opt;
    std::string command;
    for (const char *name : {"analytic", "mc", "compare", "sensitivity", "kopt", "max-nrc",
                             "asymptote"}) {
        CLI::App *cmd = app.add_subcommand(name);
        add_common(cmd, opt);
        if (std::string(name) == "max-nrc") {
            cmd->add_option("--target-sinr-db", opt.target_sinr_db,
                            "target SINR grid in dB (default 0..18 step 3)");
            cmd->add_option("--rho-d-db", opt.rho_d_db_points,
                            "DL SNR operating points in dB (default 0 and 20)");
        }
        cmd->callback([&command, name] { command = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        return run(command, opt);
    } catch (const nrcsim::ParseError &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const nrcsim::DimensionError &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const nrcsim::PilotError &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const nrcsim::RangeError &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const nrcsim::StatsError &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
