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

#ifndef nrcsim_system_config_H
#define nrcsim_system_config_H

#include <cassert>
#include <numeric>
#include <string>
#include <vector>

#include "errors.hpp"

namespace nrcsim {

enum class PrecoderKind { zf, mrt };

inline const char *to_string(PrecoderKind k)
{
    return k == PrecoderKind::zf ? "zf" : "mrt";
}

// Cell dimensions and SNRs. SNRs are linear power ratios; dB exists only at
// the CLI/config boundary. Value object: construct, validate, share freely.
struct SystemConfig {
    int n_bs = 0;                  // number of BS antennas N
    std::vector<int> ue_antennas;  // M_k per UE, k = 1..K
    int tau_u = 0;                 // UL pilot length in symbols
    double rho_u = 0.0;            // UL pilot SNR, linear
    double rho_d = 0.0;            // DL transmit SNR, linear
    int coherence_symbols = 0;     // T, symbols per coherence interval

    // Cached sum of ue_antennas and the antenna -> owning-UE map (UE side
    // antennas are logically indexed, first M_1 antennas belong to UE 1).
    int m_tot_cache = 0;
    std::vector<int> owner_cache;

    static SystemConfig make(int n_bs, std::vector<int> ue_antennas, int tau_u,
                             double rho_u, double rho_d, int coherence_symbols)
    {
        SystemConfig cfg;
        cfg.n_bs = n_bs;
        cfg.ue_antennas = std::move(ue_antennas);
        cfg.tau_u = tau_u;
        cfg.rho_u = rho_u;
        cfg.rho_d = rho_d;
        cfg.coherence_symbols = coherence_symbols;
        cfg.refresh_cache();
        return cfg;
    }

    // K UEs with the same antenna count each.
    static SystemConfig uniform(int n_bs, int k_users, int antennas_per_ue, int tau_u,
                                double rho_u, double rho_d, int coherence_symbols)
    {
        return make(n_bs, std::vector<int>(static_cast<std::size_t>(k_users), antennas_per_ue),
                    tau_u, rho_u, rho_d, coherence_symbols);
    }

    void refresh_cache()
    {
        m_tot_cache = std::accumulate(ue_antennas.begin(), ue_antennas.end(), 0);
        owner_cache.clear();
        owner_cache.reserve(static_cast<std::size_t>(m_tot_cache > 0 ? m_tot_cache : 0));
        for (std::size_t k = 0; k < ue_antennas.size(); ++k)
            for (int i = 0; i < ue_antennas[k]; ++i)
                owner_cache.push_back(static_cast<int>(k));
    }

    int k_users() const { return static_cast<int>(ue_antennas.size()); }

    int m_tot() const
    {
        assert(m_tot_cache == std::accumulate(ue_antennas.begin(), ue_antennas.end(), 0));
        return m_tot_cache;
    }

    // Owning UE of antenna m (0-based logical antenna index).
    int owner(int m) const
    {
        assert(m >= 0 && m < m_tot());
        return owner_cache[static_cast<std::size_t>(m)];
    }

    // Antennas of the UE that owns antenna m.
    int ue_size_of(int m) const { return ue_antennas[static_cast<std::size_t>(owner(m))]; }

    bool operator==(const SystemConfig &) const = default;
};

// Throws on the first violated invariant:
//   DimensionError  N <= M_tot or no antennas at all
//   PilotError      tau_u < M_tot or T < tau_u
//   RangeError      non-positive SNRs or antenna counts
inline void validate_config(const SystemConfig &cfg)
{
    if (cfg.ue_antennas.empty())
        throw DimensionError("config: at least one UE is required");
    for (std::size_t k = 0; k < cfg.ue_antennas.size(); ++k)
        if (cfg.ue_antennas[k] < 1)
            throw RangeError("config: UE " + std::to_string(k + 1) + " has antenna count < 1");
    const int m_tot = cfg.m_tot();
    if (cfg.n_bs <= m_tot)
        throw DimensionError("config: n_bs = " + std::to_string(cfg.n_bs) +
                             " must exceed total UE antennas M_tot = " + std::to_string(m_tot));
    if (cfg.tau_u < m_tot)
        throw PilotError("config: tau_u = " + std::to_string(cfg.tau_u) +
                         " violates tau_u >= M_tot = " + std::to_string(m_tot));
    if (cfg.coherence_symbols < cfg.tau_u)
        throw PilotError("config: coherence_symbols = " + std::to_string(cfg.coherence_symbols) +
                         " must be >= tau_u = " + std::to_string(cfg.tau_u));
    if (!(cfg.rho_u > 0.0))
        throw RangeError("config: rho_u must be > 0");
    if (!(cfg.rho_d > 0.0))
        throw RangeError("config: rho_d must be > 0");
}

} // namespace nrcsim

#endif
