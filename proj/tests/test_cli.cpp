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
// End-to-end checks of the installed command-line interface. The binary
// path arrives via NRCSIM_BIN, the shipped configs via NRCSIM_DATA.

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

std::string bin_path()
{
    const char *p = std::getenv("NRCSIM_BIN");
    REQUIRE(p != nullptr);
    return p;
}

std::string data_dir()
{
    const char *p = std::getenv("NRCSIM_DATA");
    REQUIRE(p != nullptr);
    return p;
}

fs::path work_dir()
{
    const auto dir = fs::temp_directory_path() / "nrcsim_cli_tests";
    fs::create_directories(dir);
    return dir;
}

struct RunResult {
    int exit_code = -1;
    std::string stdout_text;
};

RunResult run_cli(const std::string &args)
{
    const auto out = work_dir() / "stdout.txt";
    const std::string cmd = bin_path() + " " + args + " > " + out.string() + " 2>/dev/null";
    const int raw = std::system(cmd.c_str());
    RunResult res;
    res.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    std::ifstream f(out);
    std::stringstream buf;
    buf << f.rdbuf();
    res.stdout_text = buf.str();
    return res;
}

std::string slurp(const fs::path &p)
{
    std::ifstream f(p, std::ios::binary);
    std::stringstream buf;
    buf << f.rdbuf();
    return buf.str();
}

// Small cell so the Monte Carlo paths finish quickly.
fs::path small_config()
{
    const auto path = work_dir() / "small.json";
    std::ofstream f(path);
    f << R"({
      "system": {"n_bs": 24, "k_users": 4, "ue_antennas": 1, "tau_u": 4,
                 "rho_u_db": 0.0, "rho_d_db": 10.0, "coherence_symbols": 64},
      "nrc_db": {"sigma2_a_d_db": -20.0, "sigma2_c_d_db": -20.0,
                 "delta2_c_d_db": -30.0, "sigma2_c_od_db": -30.0},
      "sweep": {"variable": "rho_d_db", "grid": [0, 10],
                "precoders": ["zf", "mrt"], "engines": ["analytic", "mc"],
                "mc_realizations": 120, "seed": 11}
    })";
    return path;
}

} // namespace

TEST_CASE("unknown subcommand exits with the usage code")
{
    REQUIRE(run_cli("frobnicate").exit_code == 1);
    REQUIRE(run_cli("").exit_code == 1);  // subcommand required
}

TEST_CASE("missing config file is a usage-level failure")
{
    REQUIRE(run_cli("analytic").exit_code == 1);  // --config required
}

TEST_CASE("validation failures exit with code 2")
{
    const auto path = work_dir() / "invalid.json";
    {
        std::ofstream f(path);
        f << R"({"system": {"n_bs": 10, "k_users": 20, "ue_antennas": 1, "tau_u": 20,
                 "rho_u_db": 0.0, "rho_d_db": 20.0, "coherence_symbols": 196}})";
    }
    REQUIRE(run_cli("analytic --config " + path.string()).exit_code == 2);

    const auto bad = work_dir() / "unparsable.json";
    {
        std::ofstream f(bad);
        f << "{ not json";
    }
    REQUIRE(run_cli("analytic --config " + bad.string()).exit_code == 2);
}

TEST_CASE("analytic subcommand writes csv and matching manifest")
{
    const auto cfg = small_config();
    const auto out = work_dir() / "analytic.csv";
    const auto res = run_cli("analytic --config " + cfg.string() + " --out " + out.string());
    REQUIRE(res.exit_code == 0);
    const std::string csv = slurp(out);
    REQUIRE(csv.rfind("variable,value,precoder,engine,antenna,sinr_db,", 0) == 0);
    // 2 grid x 2 precoders x 1 engine x (4 antennas + 2 aggregates)
    REQUIRE(std::count(csv.begin(), csv.end(), '\n') == 1 + 2 * 2 * 6);

    const auto manifest = nlohmann::json::parse(slurp(out.string() + ".manifest.json"));
    REQUIRE(manifest["command"] == "analytic");
    REQUIRE(manifest["csv_rows"] == 2 * 2 * 6);
    // recompute the checksum over the emitted bytes
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : csv) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char expect[32];
    std::snprintf(expect, sizeof expect, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
    REQUIRE(manifest["csv_checksum"] == std::string(expect));
}

TEST_CASE("compare reports the worst deviation and respects the seed")
{
    const auto cfg = small_config();
    const auto out = work_dir() / "compare.csv";
    const auto res = run_cli("compare --config " + cfg.string() + " --out " + out.string() +
                             " --realizations 150 --seed 42");
    REQUIRE(res.exit_code == 0);
    REQUIRE(res.stdout_text.find("max |SINR_mc - SINR_analytic|") != std::string::npos);

    // frozen-NRC mode runs end to end and changes the estimates
    const auto frozen_out = work_dir() / "frozen.csv";
    const auto frozen = run_cli("mc --config " + cfg.string() + " --out " + frozen_out.string() +
                                " --realizations 150 --seed 42 --freeze-nrc");
    REQUIRE(frozen.exit_code == 0);
    const auto plain_out = work_dir() / "plain.csv";
    REQUIRE(run_cli("mc --config " + cfg.string() + " --out " + plain_out.string() +
                    " --realizations 150 --seed 42")
                .exit_code == 0);
    REQUIRE(slurp(frozen_out) != slurp(plain_out));
}

TEST_CASE("identical seeds with different thread counts emit identical bytes")
{
    const auto cfg = small_config();
    const auto out1 = work_dir() / "t1.csv";
    const auto out3 = work_dir() / "t3.csv";
    REQUIRE(run_cli("compare --config " + cfg.string() + " --out " + out1.string() +
                    " --seed 7 --threads 1")
                .exit_code == 0);
    REQUIRE(run_cli("compare --config " + cfg.string() + " --out " + out3.string() +
                    " --seed 7 --threads 3")
                .exit_code == 0);
    REQUIRE(slurp(out1) == slurp(out3));
    REQUIRE(slurp(out1).size() > 1000);
}

TEST_CASE("max-nrc prints the tolerable level for the requested target")
{
    const auto out = work_dir() / "maxnrc.csv";
    const auto res = run_cli("max-nrc --config " + std::string(data_dir()) +
                             "/baseline.json --target-sinr-db 15 --rho-d-db 20 --out " +
                             out.string());
    REQUIRE(res.exit_code == 0);
    REQUIRE(res.stdout_text.find("max NRC level") != std::string::npos);
    // closed-form inversion puts the ZF level near -23.9 dB
    const auto pos = res.stdout_text.find("zf rho_d=20.0 dB target=15.0 dB -> max NRC level ");
    REQUIRE(pos != std::string::npos);
    const double level = std::strtod(
        res.stdout_text.c_str() + pos + std::string("zf rho_d=20.0 dB target=15.0 dB -> "
                                                    "max NRC level ")
                                            .size(),
        nullptr);
    REQUIRE(level > -25.0);
    REQUIRE(level < -22.0);
    const std::string csv = slurp(out);
    REQUIRE(csv.rfind("rho_d_db,target_sinr_db,precoder,feasible,", 0) == 0);
}

TEST_CASE("kopt and sensitivity and asymptote subcommands run end to end")
{
    const auto level_cfg = work_dir() / "levels.json";
    {
        std::ofstream f(level_cfg);
        f << R"({
          "system": {"n_bs": 60, "k_users": 8, "ue_antennas": 1, "tau_u": 8,
                     "rho_u_db": 0.0, "rho_d_db": 20.0, "coherence_symbols": 96},
          "sweep": {"variable": "nrc_level_db", "grid": [-30, -20, -10],
                    "precoders": ["zf", "mrt"], "engines": ["analytic"]}
        })";
    }
    const auto kout = work_dir() / "kopt.csv";
    auto res = run_cli("kopt --config " + level_cfg.string() + " --out " + kout.string());
    REQUIRE(res.exit_code == 0);
    const std::string kcsv = slurp(kout);
    REQUIRE(kcsv.rfind("rho_d_db,nrc_level_db,precoder,k_opt", 0) == 0);
    // 2 rho_d x 3 levels x 2 precoders
    REQUIRE(std::count(kcsv.begin(), kcsv.end(), '\n') == 1 + 12);

    const auto sout = work_dir() / "sens.csv";
    res = run_cli("sensitivity --config " + level_cfg.string() + " --out " + sout.string());
    REQUIRE(res.exit_code == 0);
    REQUIRE(slurp(sout).find("sigma2_c_od_db") != std::string::npos);
    REQUIRE(slurp(sout).find("sigma2_c_d_joint_db") != std::string::npos);

    const auto n_cfg = work_dir() / "nsweep.json";
    {
        std::ofstream f(n_cfg);
        f << R"({
          "system": {"n_bs": 60, "k_users": 8, "ue_antennas": 1, "tau_u": 8,
                     "rho_u_db": 0.0, "rho_d_db": 20.0, "coherence_symbols": 96},
          "nrc_db": {"sigma2_a_d_db": -20.0, "sigma2_c_d_db": -20.0,
                     "delta2_c_d_db": -30.0, "sigma2_c_od_db": -30.0},
          "sweep": {"variable": "n_bs", "grid": [60, 600, 6000],
                    "precoders": ["zf"], "engines": ["analytic"]}
        })";
    }
    const auto aout = work_dir() / "asym.csv";
    res = run_cli("asymptote --config " + n_cfg.string() + " --out " + aout.string());
    REQUIRE(res.exit_code == 0);
    REQUIRE(slurp(aout).find(",asymptote,") != std::string::npos);

    // wrong variable for the asymptote runner is a validation failure
    res = run_cli("asymptote --config " + level_cfg.string() + " --out " + aout.string());
    REQUIRE(res.exit_code == 2);
}
