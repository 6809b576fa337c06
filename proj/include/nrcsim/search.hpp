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

#ifndef nrcsim_search_H
#define nrcsim_search_H

#include <algorithm>
#include <cstdint>
#include <limits>

#include "analytic.hpp"
#include "errors.hpp"

namespace nrcsim {

// Maps one scalar "NRC level" L to the five second-order statistics.
// Default rule: diagonal stats equal the level, off-diagonal and
// cross-correlation stats sit 10 dB below it, UE-side mutual coupling off
// (single-antenna UE studies).
struct CouplingRule {
    double a_d = 1.0;
    double a_od = 0.0;
    double c_d = 1.0;
    double d_cd = 0.1;
    double c_od = 0.1;

    NrcStats at_level(double level) const
    {
        NrcStats s;
        s.sigma2_a_d = a_d * level;
        s.sigma2_a_od = a_od * level;
        s.sigma2_c_d = c_d * level;
        s.delta2_c_d = d_cd * level;
        s.sigma2_c_od = c_od * level;
        return s;
    }

    bool operator==(const CouplingRule &) const = default;
};

// Spectral-efficiency-maximizing number of simultaneously scheduled
// single-antenna UEs, by exhaustive scan over K = 1..N-1. Each candidate
// rebuilds the pilot length as tau_u = K (the pilot budget tracks the user
// count), which changes both the estimation quality and the overhead
// factor 1 - tau_u/T. Ties break toward smaller K.
inline int k_opt_search(const SystemConfig &base, const NrcStats &nrc, PrecoderKind kind,
                        double rho_d)
{
    int best_k = 1;
    double best_se = -1.0;
    const int k_max = std::min(base.n_bs - 1, base.coherence_symbols);
    for (int k = 1; k <= k_max; ++k) {
        SystemConfig cfg = SystemConfig::uniform(base.n_bs, k, 1, k, base.rho_u, rho_d,
                                                 base.coherence_symbols);
        const double se = spectral_efficiency(cfg, nrc, kind);
        if (se > best_se) {
            best_se = se;
            best_k = k;
        }
    }
    return best_k;
}

struct MaxNrcResult {
    double level = 0.0;          // largest tolerable NRC level, linear
    double sinr_at_level = 0.0;  // minimum per-antenna SINR at that level
};

namespace detail {

inline double min_sinr_at_level(const SystemConfig &cfg, const CouplingRule &coupling,
                                PrecoderKind kind, double level)
{
    const NrcStats nrc = coupling.at_level(level);
    double worst = std::numeric_limits<double>::infinity();
    for (int m = 0; m < cfg.m_tot(); ++m)
        worst = std::min(worst, sinr(cfg, nrc, m, kind));
    return worst;
}

} // namespace detail

// Largest NRC level L in [0, l_hi] with SINR >= target, by bisection to a
// relative tolerance of 1e-6 on L. Correctness rests on monotonicity: every
// I_NRC bracket is increasing in each NRC statistic, so SINR is strictly
// decreasing in L. The default bracket tops out at 0 dB; callers may widen
// it. Throws InfeasibleTarget when even a perfectly calibrated system
// misses the target.
inline MaxNrcResult max_tolerable_nrc(const SystemConfig &cfg, double target_sinr,
                                      PrecoderKind kind, const CouplingRule &coupling = {},
                                      double l_hi = 1.0)
{
    validate_config(cfg);
    const double s0 = detail::min_sinr_at_level(cfg, coupling, kind, 0.0);
    if (s0 < target_sinr)
        throw InfeasibleTarget("max_tolerable_nrc: target SINR exceeds the zero-NRC SINR");
    if (detail::min_sinr_at_level(cfg, coupling, kind, l_hi) >= target_sinr)
        return {l_hi, detail::min_sinr_at_level(cfg, coupling, kind, l_hi)};

    double lo = 0.0;  // feasible
    double hi = l_hi; // infeasible
    for (int it = 0; it < 200 && hi - lo > 1e-6 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (detail::min_sinr_at_level(cfg, coupling, kind, mid) >= target_sinr)
            lo = mid;
        else
            hi = mid;
    }
    return {lo, detail::min_sinr_at_level(cfg, coupling, kind, lo)};
}

} // namespace nrcsim

#endif
