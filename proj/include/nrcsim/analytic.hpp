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
// Closed-form downlink performance of a linearly precoded multi-user
// massive MIMO system under channel non-reciprocity (NRC) and MMSE channel
// estimation errors, for ZF and MRT precoding with statistical-CSI
// detection at the UEs.
//
// Conventions, used consistently below:
//   N      BS antennas                     M      total UE-side antennas
//   tr     tau_u * rho_u                   rd     rho_d
//   tra    Tr(R_{a'_m}) for antenna m      s2a    variance of a'_mm
//   trd    Tr(R_{c'_d})                    sumd   Sum(R_{c'_d})
//   trod   Tr(R_{c'_od})
//
// The total interference-plus-noise power splits into the reciprocal-case
// part I_RC (ZF: rd + tr + 1, MRT: (rd+1)(tr+1)) and the NRC-induced part
// I_NRC,m, so SINR_m = prefactor * tr * rd / (I_RC + I_NRC,m) with
// prefactor (N-M)/M for ZF and N/M for MRT.

#ifndef nrcsim_analytic_H
#define nrcsim_analytic_H

#include <cmath>
#include <optional>
#include <vector>

#include "nrc_stats.hpp"
#include "system_config.hpp"

namespace nrcsim {

// Reciprocal-case interference-plus-noise power.
inline double i_rc(const SystemConfig &cfg, PrecoderKind kind)
{
    const double tr = cfg.tau_u * cfg.rho_u;
    if (kind == PrecoderKind::zf)
        return cfg.rho_d + tr + 1.0;
    return (cfg.rho_d + 1.0) * (tr + 1.0);
}

// NRC-induced additional interference power at UE-side antenna m (0-based).
// `kind` selects the ZF form (first bracket (1 + (N-M)/M tr) tra,
// plus-signed cross-antenna correction) or the MRT form
// ((1 + (N+M)/M tr) tra, minus-signed correction); the two C'-driven
// brackets are shared.
inline double i_nrc(const SystemConfig &cfg, const NrcStats &nrc, int m, PrecoderKind kind)
{
    const NrcAggregates aggr = nrc_aggregates(cfg, nrc);
    const double n = cfg.n_bs;
    const double mt = cfg.m_tot();
    const double tr = cfg.tau_u * cfg.rho_u;
    const double tra = aggr.tr_ra[static_cast<std::size_t>(m)];
    const double s2a = nrc.sigma2_a_d;

    double b12;
    if (kind == PrecoderKind::zf)
        b12 = (1.0 + (n - mt) / mt * tr) * tra + tr / mt * (tra - s2a);
    else
        b12 = (1.0 + (n + mt) / mt * tr) * tra - tr / mt * (tra - s2a);
    const double b3 = tr / (n * mt) * (1.0 + tra) * aggr.sum_rc_d;
    const double b4 = ((tr + 1.0) / n * (1.0 + tra) - tr / (n * mt) * (tra - s2a)) *
                      (aggr.tr_rc_d + aggr.tr_rc_od);
    return cfg.rho_d * (b12 + b3 + b4);
}

inline double i_nrc_zf(const SystemConfig &cfg, const NrcStats &nrc, int m)
{
    return i_nrc(cfg, nrc, m, PrecoderKind::zf);
}

inline double i_nrc_mrt(const SystemConfig &cfg, const NrcStats &nrc, int m)
{
    return i_nrc(cfg, nrc, m, PrecoderKind::mrt);
}

// Effective SINR at UE-side antenna m (0-based).
inline double sinr(const SystemConfig &cfg, const NrcStats &nrc, int m, PrecoderKind kind)
{
    validate_config(cfg);
    const double mt = cfg.m_tot();
    const double tr = cfg.tau_u * cfg.rho_u;
    const double pre = kind == PrecoderKind::zf ? (cfg.n_bs - mt) / mt : cfg.n_bs / mt;
    return pre * tr * cfg.rho_d / (i_rc(cfg, kind) + i_nrc(cfg, nrc, m, kind));
}

// Per-antenna SINRs plus the interference split, the capacity lower bound
// and the pilot-overhead-discounted spectral efficiency.
struct AnalyticResult {
    std::vector<double> sinr;       // per antenna, linear
    double i_rc = 0.0;              // reciprocal-case interference-plus-noise
    std::vector<double> i_nrc;      // per antenna, NRC-induced interference
    double rate = 0.0;              // sum over antennas of log2(1 + SINR_m)
    double spectral_efficiency = 0.0;  // (1 - tau_u/T) * rate
    PrecoderKind precoder = PrecoderKind::zf;
};

inline AnalyticResult evaluate(const SystemConfig &cfg, const NrcStats &nrc, PrecoderKind kind)
{
    validate_config(cfg);
    validate_stats(nrc);

    AnalyticResult res;
    res.precoder = kind;
    const int m_tot = cfg.m_tot();
    const double tr = cfg.tau_u * cfg.rho_u;
    const double pre = kind == PrecoderKind::zf ? (cfg.n_bs - m_tot) / double(m_tot)
                                                : cfg.n_bs / double(m_tot);
    res.i_rc = i_rc(cfg, kind);
    res.sinr.resize(static_cast<std::size_t>(m_tot));
    res.i_nrc.resize(static_cast<std::size_t>(m_tot));
    for (int m = 0; m < m_tot; ++m) {
        const double inrc = i_nrc(cfg, nrc, m, kind);
        res.i_nrc[static_cast<std::size_t>(m)] = inrc;
        res.sinr[static_cast<std::size_t>(m)] = pre * tr * cfg.rho_d / (res.i_rc + inrc);
        res.rate += std::log2(1.0 + res.sinr[static_cast<std::size_t>(m)]);
    }
    res.spectral_efficiency =
        (1.0 - cfg.tau_u / static_cast<double>(cfg.coherence_symbols)) * res.rate;
    return res;
}

// Capacity lower bound, reusing per-antenna SINRs.
inline double sum_rate(const SystemConfig &cfg, const NrcStats &nrc, PrecoderKind kind)
{
    return evaluate(cfg, nrc, kind).rate;
}

inline double spectral_efficiency(const SystemConfig &cfg, const NrcStats &nrc, PrecoderKind kind)
{
    return evaluate(cfg, nrc, kind).spectral_efficiency;
}

// Large-N limit of the per-antenna SINR. Identical for ZF and MRT by
// construction (single code path). In the reciprocal case the SINR grows
// without bound; that is a typed signal here, not an infinity that could
// leak into rate computations.
struct SaturationLimit {
    bool bounded = false;
    double sinr = 0.0;  // meaningful only when bounded
};

inline SaturationLimit asymptotic_sinr(const SystemConfig &cfg, const NrcStats &nrc, int m)
{
    const NrcAggregates aggr = nrc_aggregates(cfg, nrc);
    const double tra = aggr.tr_ra[static_cast<std::size_t>(m)];
    const double tr = cfg.tau_u * cfg.rho_u;
    const double mt = cfg.m_tot();
    const double t_d = 1.0 + tra;
    const double t_od = mt * (tr + 1.0) / tr * (1.0 + tra) - tra + nrc.sigma2_a_d;
    const double den = tra + t_d * nrc.delta2_c_d + t_od * nrc.sigma2_c_od;
    if (den <= 0.0)
        return {false, 0.0};
    return {true, 1.0 / den};
}

// Spectral efficiency at the saturation level (every antenna at the limit
// SINR, same overhead factor). Unbounded saturation yields no value.
inline std::optional<double> saturation_spectral_efficiency(const SystemConfig &cfg,
                                                            const NrcStats &nrc)
{
    validate_config(cfg);
    double rate = 0.0;
    for (int m = 0; m < cfg.m_tot(); ++m) {
        const SaturationLimit lim = asymptotic_sinr(cfg, nrc, m);
        if (!lim.bounded)
            return std::nullopt;
        rate += std::log2(1.0 + lim.sinr);
    }
    return (1.0 - cfg.tau_u / static_cast<double>(cfg.coherence_symbols)) * rate;
}

// Right-hand side of the exact ZF/MRT SINR relation; equals
// sinr(zf)/sinr(mrt) computed directly (checked to 1e-10 in the tests).
inline double sinr_ratio_zf_mrt(const SystemConfig &cfg, const NrcStats &nrc, int m)
{
    const NrcAggregates aggr = nrc_aggregates(cfg, nrc);
    const double n = cfg.n_bs;
    const double mt = cfg.m_tot();
    const double tr = cfg.tau_u * cfg.rho_u;
    const double tra = aggr.tr_ra[static_cast<std::size_t>(m)];
    const double delta = tra - (tra - nrc.sigma2_a_d) / mt;
    const double sinr_zf = sinr(cfg, nrc, m, PrecoderKind::zf);
    const double d_zf = cfg.rho_d + tr + 1.0 + i_nrc(cfg, nrc, m, PrecoderKind::zf);
    return 1.0 + mt / n * (sinr_zf - 1.0) +
           (1.0 - mt / n) * 2.0 * cfg.rho_d * tr * delta / d_zf;
}

// Relative SINR degradation vs. the reciprocal reference, in [0, 1).
inline double degradation_alpha(const SystemConfig &cfg, const NrcStats &nrc, int m,
                                PrecoderKind kind)
{
    const double s_rc = sinr(cfg, NrcStats{}, m, kind);
    const double s_nrc = sinr(cfg, nrc, m, kind);
    return (s_rc - s_nrc) / s_rc;
}

// rho_d -> infinity limit of alpha_zf/alpha_mrt. I_NRC scales linearly in
// rho_d, so I_NRC/rho_d below is rho_d-independent. Degenerates 0/0 at zero
// NRC (ratio absent). The predicate marks the regime where ZF is the more
// NRC-sensitive precoder; for tau_u >= M_tot it reduces to
// rho_u > 1/(N - M_tot).
struct AlphaRatioHighSnr {
    std::optional<double> ratio;
    bool zf_more_sensitive = false;
};

inline AlphaRatioHighSnr alpha_ratio_high_snr(const SystemConfig &cfg, const NrcStats &nrc, int m)
{
    const NrcAggregates aggr = nrc_aggregates(cfg, nrc);
    const double tr = cfg.tau_u * cfg.rho_u;
    const double mt = cfg.m_tot();
    const double tra = aggr.tr_ra[static_cast<std::size_t>(m)];
    const double delta = tra - (tra - nrc.sigma2_a_d) / mt;
    const double j = i_nrc(cfg, nrc, m, PrecoderKind::zf) / cfg.rho_d;

    AlphaRatioHighSnr out;
    out.zf_more_sensitive = cfg.rho_u > 1.0 / (cfg.n_bs - cfg.m_tot());
    const double i0 = (2.0 * tr * delta + j + 1.0) * j;
    const double den = i0 + 2.0 * tr * delta;
    if (den == 0.0)
        return out;  // zero NRC: 0/0, not applicable
    out.ratio = (i0 + tr * j) / den;
    return out;
}

// Interference variances assembled from the per-term appendix expressions
// (t1..t3 for SI and ISI under ZF; t11/t12/t2/t3 SI and t1/t2 ISI under
// MRT), under the homogeneous-statistics model. Dual route to the SINR:
// useful / (var_si + var_isi + 1) reproduces the closed form above to
// floating-point accuracy.
struct InterferenceBreakdown {
    double var_si = 0.0;        // Var(z^SI)
    double var_isi = 0.0;       // Var(z^ISI)
    double useful_power = 0.0;  // power of the statistical-CSI useful term
    double noise_power = 1.0;
};

inline InterferenceBreakdown appendix_variance_terms(const SystemConfig &cfg,
                                                     const NrcStats &nrc, int m,
                                                     PrecoderKind kind)
{
    validate_config(cfg);
    const NrcAggregates aggr = nrc_aggregates(cfg, nrc);
    const double n = cfg.n_bs;
    const double mt = cfg.m_tot();
    const double tr = cfg.tau_u * cfg.rho_u;
    const double rd = cfg.rho_d;
    const double tra = aggr.tr_ra[static_cast<std::size_t>(m)];
    const double s2a = nrc.sigma2_a_d;
    const double trd = aggr.tr_rc_d;
    const double sumd = aggr.sum_rc_d;
    const double trod = aggr.tr_rc_od;
    const double sh2 = tr / (tr + 1.0);  // variance of estimated-channel entries

    InterferenceBreakdown out;
    if (kind == PrecoderKind::zf) {
        const double beta2 = (n - mt) * tr / (mt * (tr + 1.0));
        const double t1_si = s2a + (tra - s2a) / (n - mt);
        const double t2_si =
            ((1.0 + s2a) * sumd + (1.0 + tra) * (trd + trod)) / (n * (n - mt));
        const double t3_si = (1.0 + tra) / (n * mt * beta2 * (tr + 1.0)) * (n + trd + trod);
        const double t1_isi = tra - s2a;
        const double t2_isi = (((1.0 + s2a) + (mt - 2.0) * (1.0 + tra)) * (trd + trod) +
                               (tra - s2a) * sumd) /
                              (n * (n - mt));
        const double t3_isi =
            (mt - 1.0) * (1.0 + tra) / (n * mt * beta2 * (tr + 1.0)) * (n + trd + trod);
        out.useful_power = rd * beta2;
        out.var_si = rd * beta2 * (t1_si + t2_si + t3_si);
        out.var_isi = rd * beta2 * (t1_isi + t2_isi + t3_isi);
    } else {
        const double beta2 = (tr + 1.0) / (n * mt * tr);
        const double t11_si = n * (1.0 + s2a * (n + 1.0)) * sh2 * sh2;
        const double t12_si = n * (tra - s2a) * sh2 * sh2;
        const double t2_si = sh2 * sh2 * ((1.0 + s2a) * sumd + (1.0 + tra) * (trd + trod));
        const double t3_si = tr / ((tr + 1.0) * (tr + 1.0)) * (1.0 + tra) * (n + trd + trod);
        const double t1_isi =
            sh2 * sh2 * (((mt - 2.0) * (1.0 + tra) + (1.0 + s2a)) * (n + trd + trod) +
                         (tra - s2a) * (n * n + sumd));
        const double t2_isi = (mt - 1.0) * tr / ((tr + 1.0) * (tr + 1.0)) * (1.0 + tra) *
                              (n + trd + trod);
        out.useful_power = rd * beta2 * (n * sh2) * (n * sh2);
        out.var_si = rd * beta2 * (t11_si + t12_si + t2_si + t3_si);
        out.var_isi = rd * beta2 * (t1_isi + t2_isi);
    }
    return out;
}

inline double sinr_from_breakdown(const InterferenceBreakdown &b)
{
    return b.useful_power / (b.var_si + b.var_isi + b.noise_power);
}

} // namespace nrcsim

#endif
