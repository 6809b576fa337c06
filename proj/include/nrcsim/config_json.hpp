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
// JSON run configuration. SNR-like fields carry a _db suffix and are
// converted to linear exactly once here; linear power fields are rejected
// at this boundary to prevent unit mistakes. The parsed result keeps the
// canonical resolved JSON (defaults applied, dB values verbatim), which is
// what run manifests embed, so parse(emit(resolved)) round-trips exactly.

#ifndef nrcsim_config_json_H
#define nrcsim_config_json_H

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "sweep.hpp"
#include "units.hpp"

namespace nrcsim {

struct ParsedConfig {
    SystemConfig system;
    NrcStats nrc;
    SweepSpec sweep;
    nlohmann::json resolved;
};

namespace detail {

using nlohmann::json;

inline void reject_unknown_keys(const json &obj, const char *block,
                                std::initializer_list<const char *> known)
{
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char *k : known)
            if (it.key() == k)
                ok = true;
        if (!ok)
            throw ParseError(std::string("config: unknown field ") + block + "." + it.key() +
                             (it.key().find("_db") == std::string::npos
                                  ? " (power fields take a _db suffix)"
                                  : ""));
    }
}

inline const json &require(const json &obj, const char *block, const char *key)
{
    auto it = obj.find(key);
    if (it == obj.end())
        throw ParseError(std::string("config: missing field ") + block + "." + key);
    return *it;
}

inline double require_number(const json &obj, const char *block, const char *key)
{
    const json &v = require(obj, block, key);
    if (!v.is_number())
        throw ParseError(std::string("config: field ") + block + "." + key +
                         " must be a number");
    return v.get<double>();
}

inline int require_int(const json &obj, const char *block, const char *key)
{
    const json &v = require(obj, block, key);
    if (!v.is_number_integer())
        throw ParseError(std::string("config: field ") + block + "." + key +
                         " must be an integer");
    return v.get<int>();
}

// dB value or null (meaning zero linear power).
inline double optional_db(const json &obj, const char *block, const char *key)
{
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null())
        return 0.0;
    if (!it->is_number())
        throw ParseError(std::string("config: field ") + block + "." + key +
                         " must be a number in dB or null");
    return db_to_linear(it->get<double>());
}

} // namespace detail

inline ParsedConfig parse_config_json(const nlohmann::json &root)
{
    using nlohmann::json;
    if (!root.is_object())
        throw ParseError("config: top level must be a JSON object");
    detail::reject_unknown_keys(root, "", {"system", "nrc_db", "sweep"});

    // --- system ---
    auto sys_it = root.find("system");
    if (sys_it == root.end())
        throw ParseError("config: missing field system");
    const json &sys = *sys_it;
    detail::reject_unknown_keys(sys, "system",
                                {"n_bs", "k_users", "ue_antennas", "tau_u", "rho_u_db",
                                 "rho_d_db", "coherence_symbols"});
    const int n_bs = detail::require_int(sys, "system", "n_bs");
    std::vector<int> ue_antennas;
    const json &ua = detail::require(sys, "system", "ue_antennas");
    if (ua.is_array()) {
        for (const json &v : ua) {
            if (!v.is_number_integer())
                throw ParseError("config: system.ue_antennas entries must be integers");
            ue_antennas.push_back(v.get<int>());
        }
        if (sys.contains("k_users") &&
            sys["k_users"].get<int>() != static_cast<int>(ue_antennas.size()))
            throw ParseError("config: system.k_users disagrees with the ue_antennas list");
    } else if (ua.is_number_integer()) {
        const int k = detail::require_int(sys, "system", "k_users");
        if (k < 1)
            throw ParseError("config: system.k_users must be >= 1");
        ue_antennas.assign(static_cast<std::size_t>(k), ua.get<int>());
    } else {
        throw ParseError("config: system.ue_antennas must be an integer or an integer list");
    }
    SystemConfig cfg = SystemConfig::make(
        n_bs, ue_antennas, detail::require_int(sys, "system", "tau_u"),
        db_to_linear(detail::require_number(sys, "system", "rho_u_db")),
        db_to_linear(detail::require_number(sys, "system", "rho_d_db")),
        detail::require_int(sys, "system", "coherence_symbols"));
    validate_config(cfg);

    // --- nrc_db ---
    // The resolved form keeps the user's dB numbers verbatim (null = zero
    // linear power); re-deriving dB from linear would not round-trip
    // bit-exactly.
    NrcStats nrc;
    nlohmann::json nrc_resolved = {{"sigma2_a_d_db", nullptr},
                                   {"sigma2_a_od_db", nullptr},
                                   {"sigma2_c_d_db", nullptr},
                                   {"delta2_c_d_db", nullptr},
                                   {"sigma2_c_od_db", nullptr}};
    if (auto it = root.find("nrc_db"); it != root.end()) {
        detail::reject_unknown_keys(*it, "nrc_db",
                                    {"sigma2_a_d_db", "sigma2_a_od_db", "sigma2_c_d_db",
                                     "delta2_c_d_db", "sigma2_c_od_db"});
        nrc.sigma2_a_d = detail::optional_db(*it, "nrc_db", "sigma2_a_d_db");
        nrc.sigma2_a_od = detail::optional_db(*it, "nrc_db", "sigma2_a_od_db");
        nrc.sigma2_c_d = detail::optional_db(*it, "nrc_db", "sigma2_c_d_db");
        nrc.delta2_c_d = detail::optional_db(*it, "nrc_db", "delta2_c_d_db");
        nrc.sigma2_c_od = detail::optional_db(*it, "nrc_db", "sigma2_c_od_db");
        for (const char *key : {"sigma2_a_d_db", "sigma2_a_od_db", "sigma2_c_d_db",
                                "delta2_c_d_db", "sigma2_c_od_db"})
            if (it->contains(key) && !(*it)[key].is_null())
                nrc_resolved[key] = (*it)[key];
    }
    validate_stats(nrc);

    // --- sweep ---
    SweepSpec sweep;
    sweep.base = cfg;
    sweep.nrc_base = nrc;
    double coupling_offset_db = 10.0;
    if (auto it = root.find("sweep"); it != root.end()) {
        const json &sw = *it;
        detail::reject_unknown_keys(sw, "sweep",
                                    {"variable", "grid", "precoders", "engines",
                                     "mc_realizations", "seed", "coupling_offset_db",
                                     "nrc_param"});
        if (sw.contains("variable")) {
            const std::string v = sw["variable"].get<std::string>();
            if (v == "rho_d_db")
                sweep.variable = SweepVariable::rho_d_db;
            else if (v == "n_bs")
                sweep.variable = SweepVariable::n_bs;
            else if (v == "nrc_level_db")
                sweep.variable = SweepVariable::nrc_level_db;
            else if (v == "k_users")
                sweep.variable = SweepVariable::k_users;
            else if (v == "per_ue_antennas")
                sweep.variable = SweepVariable::per_ue_antennas;
            else if (v == "single_nrc_param")
                sweep.variable = SweepVariable::single_nrc_param;
            else
                throw ParseError("config: sweep.variable '" + v + "' is not recognized");
        }
        if (sw.contains("grid")) {
            if (!sw["grid"].is_array() || sw["grid"].empty())
                throw ParseError("config: sweep.grid must be a non-empty array");
            sweep.grid.clear();
            for (const json &v : sw["grid"])
                sweep.grid.push_back(v.get<double>());
        }
        if (sw.contains("precoders")) {
            sweep.precoders.clear();
            for (const json &v : sw["precoders"]) {
                const std::string s = v.get<std::string>();
                if (s == "zf")
                    sweep.precoders.push_back(PrecoderKind::zf);
                else if (s == "mrt")
                    sweep.precoders.push_back(PrecoderKind::mrt);
                else
                    throw ParseError("config: sweep.precoders entry '" + s + "' (zf|mrt)");
            }
        }
        if (sw.contains("engines")) {
            sweep.engines.clear();
            for (const json &v : sw["engines"]) {
                const std::string s = v.get<std::string>();
                if (s == "analytic")
                    sweep.engines.push_back(Engine::analytic);
                else if (s == "mc")
                    sweep.engines.push_back(Engine::mc);
                else
                    throw ParseError("config: sweep.engines entry '" + s + "' (analytic|mc)");
            }
        }
        if (sw.contains("mc_realizations"))
            sweep.mc_realizations = sw["mc_realizations"].get<std::uint64_t>();
        if (sw.contains("seed"))
            sweep.seed = sw["seed"].get<std::uint64_t>();
        if (sw.contains("coupling_offset_db")) {
            coupling_offset_db = sw["coupling_offset_db"].get<double>();
            if (coupling_offset_db < 0.0)
                throw ParseError("config: sweep.coupling_offset_db must be >= 0 (the "
                                 "off-diagonal stats sit below the diagonal level)");
        }
        if (sw.contains("nrc_param"))
            sweep.nrc_param = sw["nrc_param"].get<std::string>();
    }
    const double off = db_to_linear(-coupling_offset_db);
    sweep.coupling = CouplingRule{1.0, 0.0, 1.0, off, off};
    if (sweep.grid.empty())
        sweep.grid = {linear_to_db(cfg.rho_d)};

    // --- canonical resolved form ---
    ParsedConfig out;
    out.system = cfg;
    out.nrc = nrc;
    out.sweep = sweep;
    json precoders = json::array();
    for (PrecoderKind k : sweep.precoders)
        precoders.push_back(to_string(k));
    json engines = json::array();
    for (Engine e : sweep.engines)
        engines.push_back(to_string(e));
    out.resolved = json{
        {"system",
         {{"n_bs", cfg.n_bs},
          {"ue_antennas", cfg.ue_antennas},
          {"tau_u", cfg.tau_u},
          {"rho_u_db", sys["rho_u_db"]},
          {"rho_d_db", sys["rho_d_db"]},
          {"coherence_symbols", cfg.coherence_symbols}}},
        {"nrc_db", nrc_resolved},
        {"sweep",
         {{"variable", to_string(sweep.variable)},
          {"grid", sweep.grid},
          {"precoders", precoders},
          {"engines", engines},
          {"mc_realizations", sweep.mc_realizations},
          {"seed", sweep.seed},
          {"coupling_offset_db", coupling_offset_db},
          {"nrc_param", sweep.nrc_param}}}};
    return out;
}

inline ParsedConfig parse_config(const std::string &path)
{
    std::ifstream f(path);
    if (!f)
        throw IoError("cannot open config file: " + path);
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(f);
    } catch (const nlohmann::json::parse_error &e) {
        throw ParseError(std::string("config: ") + e.what());
    }
    return parse_config_json(root);
}

} // namespace nrcsim

#endif
