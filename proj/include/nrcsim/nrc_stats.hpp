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

#ifndef nrcsim_nrc_stats_H
#define nrcsim_nrc_stats_H

#include <vector>

#include "errors.hpp"
#include "system_config.hpp"

namespace nrcsim {

// Second-order statistics of the non-reciprocity matrices A' (UE side,
// block-diagonal) and C' (BS side, full). Homogeneous model: every element
// of a statistical class shares the class average. All values are linear
// powers; delta2_c_d is the pairwise cross-correlation of the C' diagonal
// and is restricted to real nonnegative values.
struct NrcStats {
    double sigma2_a_d = 0.0;   // variance of A' diagonal elements
    double sigma2_a_od = 0.0;  // variance of A' off-diagonal (within-UE) elements
    double sigma2_c_d = 0.0;   // variance of C' diagonal elements
    double delta2_c_d = 0.0;   // cross-correlation of C' diagonal element pairs
    double sigma2_c_od = 0.0;  // variance of C' off-diagonal elements

    bool all_zero() const
    {
        return sigma2_a_d == 0.0 && sigma2_a_od == 0.0 && sigma2_c_d == 0.0 &&
               delta2_c_d == 0.0 && sigma2_c_od == 0.0;
    }

    bool operator==(const NrcStats &) const = default;
};

inline void validate_stats(const NrcStats &nrc)
{
    if (nrc.sigma2_a_d < 0.0 || nrc.sigma2_a_od < 0.0 || nrc.sigma2_c_d < 0.0 ||
        nrc.delta2_c_d < 0.0 || nrc.sigma2_c_od < 0.0)
        throw RangeError("nrc: second-order statistics must be nonnegative");
    if (nrc.delta2_c_d > nrc.sigma2_c_d)
        throw StatsError("nrc: delta2_c_d exceeds sigma2_c_d; a cross-correlation of "
                         "identically distributed variables is bounded by their variance");
}

// The trace/sum aggregates that the closed forms actually consume.
struct NrcAggregates {
    std::vector<double> tr_ra;  // Tr(R_{a'_m}) per UE-side antenna m
    double tr_rc_d = 0.0;       // Tr(R_{c'_d})  = N * sigma2_c_d
    double sum_rc_d = 0.0;      // Sum(R_{c'_d}) = N * sigma2_c_d + N(N-1) * delta2_c_d
    double tr_rc_od = 0.0;      // Tr(R_{c'_od}) = N(N-1) * sigma2_c_od
};

// Under the homogeneous model the covariance aggregates reduce to counting:
// row m of A'_k has one diagonal element and M_k - 1 off-diagonal ones.
inline NrcAggregates nrc_aggregates(const SystemConfig &cfg, const NrcStats &nrc)
{
    validate_config(cfg);
    validate_stats(nrc);

    NrcAggregates aggr;
    const int m_tot = cfg.m_tot();
    aggr.tr_ra.resize(static_cast<std::size_t>(m_tot));
    for (int m = 0; m < m_tot; ++m)
        aggr.tr_ra[static_cast<std::size_t>(m)] =
            nrc.sigma2_a_d + (cfg.ue_size_of(m) - 1) * nrc.sigma2_a_od;

    const double n = static_cast<double>(cfg.n_bs);
    aggr.tr_rc_d = n * nrc.sigma2_c_d;
    aggr.sum_rc_d = n * nrc.sigma2_c_d + n * (n - 1.0) * nrc.delta2_c_d;
    aggr.tr_rc_od = n * (n - 1.0) * nrc.sigma2_c_od;
    return aggr;
}

} // namespace nrcsim

#endif
