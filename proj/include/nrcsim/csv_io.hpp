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
// CSV and manifest emission. Output is byte-stable: fixed header, stable
// row order (the runners already emit grid-major order), every number in
// full-precision scientific notation, '\n' newlines. A manifest with an
// FNV-1a checksum of the CSV content rides alongside every output file.

#ifndef nrcsim_csv_io_H
#define nrcsim_csv_io_H

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "sweep.hpp"
#include "units.hpp"
#include "version.hpp"

namespace nrcsim {

inline constexpr const char *csv_header =
    "variable,value,precoder,engine,antenna,sinr_db,rate_bps_hz,se_bps_hz,alpha,ci_halfwidth";

namespace detail {

inline std::string format_number(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

inline std::string format_opt(const std::optional<double> &v)
{
    return v ? format_number(*v) : std::string{};
}

} // namespace detail

inline std::uint64_t fnv1a64(std::string_view data)
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::string checksum_string(std::string_view data)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a64:%016llx",
                  static_cast<unsigned long long>(fnv1a64(data)));
    return buf;
}

inline std::string format_csv(const std::vector<SweepRow> &rows)
{
    std::string out = csv_header;
    out += '\n';
    for (const SweepRow &r : rows) {
        out += r.variable;
        out += ',';
        out += detail::format_number(r.value);
        out += ',';
        out += to_string(r.precoder);
        out += ',';
        out += r.engine;
        out += ',';
        out += r.antenna;
        out += ',';
        out += detail::format_opt(r.sinr_db);
        out += ',';
        out += detail::format_opt(r.rate);
        out += ',';
        out += detail::format_opt(r.se);
        out += ',';
        out += detail::format_opt(r.alpha);
        out += ',';
        out += detail::format_opt(r.ci_halfwidth);
        out += '\n';
    }
    return out;
}

inline std::string format_kopt_csv(const std::vector<KoptRow> &rows)
{
    std::string out = "rho_d_db,nrc_level_db,precoder,k_opt\n";
    for (const KoptRow &r : rows) {
        out += detail::format_number(linear_to_db(r.rho_d));
        out += ',';
        out += detail::format_number(r.nrc_level_db);
        out += ',';
        out += to_string(r.precoder);
        out += ',';
        out += std::to_string(r.k_opt);
        out += '\n';
    }
    return out;
}

inline std::string format_max_nrc_csv(const std::vector<MaxNrcRow> &rows)
{
    std::string out = "rho_d_db,target_sinr_db,precoder,feasible,max_level_db,achieved_sinr_db\n";
    for (const MaxNrcRow &r : rows) {
        out += detail::format_number(linear_to_db(r.rho_d));
        out += ',';
        out += detail::format_number(r.target_sinr_db);
        out += ',';
        out += to_string(r.precoder);
        out += ',';
        out += r.feasible ? '1' : '0';
        out += ',';
        out += r.feasible ? detail::format_number(r.max_level_db) : std::string{};
        out += ',';
        out += r.feasible ? detail::format_number(r.achieved_sinr_db) : std::string{};
        out += '\n';
    }
    return out;
}

inline void write_file(const std::string &path, std::string_view content)
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw IoError("cannot open for writing: " + path);
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f)
        throw IoError("write failed: " + path);
}

// Writes rows to `path` and returns the emitted checksum.
inline std::string emit_csv(const std::vector<SweepRow> &rows, const std::string &path)
{
    const std::string content = format_csv(rows);
    write_file(path, content);
    return checksum_string(content);
}

// Provenance record emitted alongside every output file.
struct RunManifest {
    std::string command;
    nlohmann::json resolved_config;
    std::uint64_t seed = 0;
    double duration_seconds = 0.0;
    std::string csv_checksum;
    std::size_t csv_rows = 0;
};

inline nlohmann::json manifest_json(const RunManifest &m)
{
    return nlohmann::json{{"tool", "nrcsim"},
                          {"version", version},
                          {"command", m.command},
                          {"engines",
                           {{"analytic", analytic_engine_version}, {"mc", mc_engine_version}}},
                          {"config", m.resolved_config},
                          {"seed", m.seed},
                          {"duration_seconds", m.duration_seconds},
                          {"csv_checksum", m.csv_checksum},
                          {"csv_rows", m.csv_rows}};
}

inline void write_manifest(const std::string &csv_path, const RunManifest &m)
{
    write_file(csv_path + ".manifest.json", manifest_json(m).dump(2) + "\n");
}

} // namespace nrcsim

#endif
