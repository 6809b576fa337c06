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
// Link-level Monte Carlo simulator. Samples the effective UL channel, its
// MMSE estimate, the NRC matrices A = I + A' and C = I + C', applies ZF or
// MRT precoding, and estimates per-antenna SINR from the statistical-CSI
// signal decomposition: useful power |E[gamma_mm]|^2, self-interference
// Var(gamma_mm), inter-stream interference E[sum_{i != m} |gamma_mi|^2],
// where gamma = beta * A G^T C U. Symbol randomness is integrated out
// analytically (unit-covariance data), so no symbols are drawn.
//
// The estimation phase is sampled from its exact law: G-hat and the error
// have i.i.d. CN entries with variances tr/(tr+1) and 1/(tr+1), and
// G = G-hat + eps^T. The explicit pilot matrix products are bypassed;
// distributionally identical and considerably cheaper.

#ifndef nrcsim_montecarlo_H
#define nrcsim_montecarlo_H

#include <algorithm>
#include <armadillo>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "errors.hpp"
#include "nrc_stats.hpp"
#include "rng.hpp"
#include "system_config.hpp"

namespace nrcsim {

struct ChannelRealization {
    arma::cx_mat g;      // effective UL channel G, N x M_tot
    arma::cx_mat g_hat;  // MMSE estimate, N x M_tot
    arma::cx_mat eps;    // estimation error, M_tot x N; G = G-hat + eps^T
};

struct NrcRealization {
    arma::cx_mat a;  // I + A', M_tot x M_tot, block-diagonal
    arma::cx_mat c;  // I + C', N x N
};

struct McEstimate {
    std::vector<double> useful_power;  // per antenna, rho_d-scaled
    std::vector<double> var_si;
    std::vector<double> var_isi;
    std::vector<double> sinr;
    std::vector<double> ci_halfwidth;  // bootstrap 95% half-width on SINR
    std::uint64_t n_realizations = 0;
    std::uint64_t seed = 0;
    std::uint64_t singular_redraws = 0;  // diagnostics
};

struct McOptions {
    unsigned threads = 0;    // 0 = auto (NRCSIM_THREADS env, then hardware)
    // Hold one NRC draw fixed across all realizations. Estimates are then
    // conditional on that draw and no longer comparable to the closed forms,
    // which average over the NRC ensemble.
    bool freeze_nrc = false;
};

namespace detail {

// Substream namespaces under one master seed.
constexpr std::uint64_t stream_bootstrap = 1ull << 32;
constexpr std::uint64_t stream_frozen_nrc = 2ull << 32;

inline void fill_cnormal(arma::cx_mat &m, double variance, RngStream &stream)
{
    std::complex<double> *p = m.memptr();
    const arma::uword count = m.n_elem;
    for (arma::uword i = 0; i < count; ++i)
        p[i] = stream.next_cnormal(variance);
}

} // namespace detail

inline unsigned resolve_threads(unsigned requested)
{
    if (requested > 0)
        return requested;
    if (const char *env = std::getenv("NRCSIM_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0)
            return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

// Normalization scalar beta making the expected BS transmit sum-power one.
inline double beta(const SystemConfig &cfg, PrecoderKind kind)
{
    const double n = cfg.n_bs;
    const double mt = cfg.m_tot();
    const double tr = cfg.tau_u * cfg.rho_u;
    if (kind == PrecoderKind::zf)
        return std::sqrt((n - mt) * tr / (mt * (tr + 1.0)));
    return std::sqrt((tr + 1.0) / (n * mt * tr));
}

// Draws G-hat and the estimation error from their exact joint law and
// reconstructs G. Fill order (column-major G-hat, then eps) is part of the
// reproducibility contract.
inline ChannelRealization sample_channel(const SystemConfig &cfg, RngStream &stream)
{
    const double tr = cfg.tau_u * cfg.rho_u;
    const double var_hat = tr / (tr + 1.0);
    const double var_eps = 1.0 / (tr + 1.0);

    ChannelRealization chan;
    chan.g_hat.set_size(static_cast<arma::uword>(cfg.n_bs),
                        static_cast<arma::uword>(cfg.m_tot()));
    chan.eps.set_size(static_cast<arma::uword>(cfg.m_tot()),
                      static_cast<arma::uword>(cfg.n_bs));
    detail::fill_cnormal(chan.g_hat, var_hat, stream);
    detail::fill_cnormal(chan.eps, var_eps, stream);
    chan.g = chan.g_hat + chan.eps.st();
    return chan;
}

// Draws A' (block-diagonal, per-UE blocks) and C'. The C' diagonal uses a
// common complex factor: c'_ii = sqrt(delta2) z0 + sqrt(sigma2 - delta2) z_i,
// which is the minimal model matching the prescribed variance and pairwise
// cross-correlation. Classes with zero variance are skipped entirely.
inline NrcRealization sample_nrc(const SystemConfig &cfg, const NrcStats &nrc,
                                 RngStream &stream)
{
    validate_stats(nrc);
    const arma::uword n = static_cast<arma::uword>(cfg.n_bs);
    const arma::uword mt = static_cast<arma::uword>(cfg.m_tot());

    NrcRealization real;
    real.a.eye(mt, mt);
    real.c.eye(n, n);

    if (nrc.sigma2_a_d > 0.0 || nrc.sigma2_a_od > 0.0) {
        arma::uword ofs = 0;
        for (int k = 0; k < cfg.k_users(); ++k) {
            const arma::uword mk = static_cast<arma::uword>(cfg.ue_antennas[static_cast<std::size_t>(k)]);
            for (arma::uword j = 0; j < mk; ++j)
                for (arma::uword i = 0; i < mk; ++i) {
                    const double var = i == j ? nrc.sigma2_a_d : nrc.sigma2_a_od;
                    if (var > 0.0)
                        real.a(ofs + i, ofs + j) += stream.next_cnormal(var);
                }
            ofs += mk;
        }
    }

    if (nrc.sigma2_c_od > 0.0) {
        for (arma::uword j = 0; j < n; ++j)
            for (arma::uword i = 0; i < n; ++i)
                if (i != j)
                    real.c(i, j) += stream.next_cnormal(nrc.sigma2_c_od);
    }
    if (nrc.sigma2_c_d > 0.0) {
        const std::complex<double> z0 = stream.next_cnormal(1.0);
        const double w_common = std::sqrt(nrc.delta2_c_d);
        const double w_own = std::sqrt(nrc.sigma2_c_d - nrc.delta2_c_d);
        for (arma::uword i = 0; i < n; ++i)
            real.c(i, i) += w_common * z0 + w_own * stream.next_cnormal(1.0);
    }
    return real;
}

// ZF: H-hat^H (H-hat H-hat^H)^{-1} via a Cholesky factorization of the
// Hermitian Gram matrix (no explicit inverse). MRT: H-hat^H.
// A factorization failure, or a pivot below 1e-12 times the matrix scale,
// raises SingularChannel (happens with probability zero for continuous
// channels; guarded anyway).
inline arma::cx_mat precode(const arma::cx_mat &g_hat, PrecoderKind kind)
{
    const arma::cx_mat h_hat = g_hat.st();  // estimated DL channel, M x N
    if (kind == PrecoderKind::mrt)
        return h_hat.t();

    const arma::cx_mat gram = h_hat * h_hat.t();
    arma::cx_mat r;
    if (!arma::chol(r, gram))
        throw SingularChannel("precode: Cholesky factorization of the Gram matrix failed");
    const arma::vec pivots = arma::square(arma::abs(r.diag()));
    const double scale = arma::trace(arma::abs(gram)) / static_cast<double>(gram.n_rows);
    if (pivots.min() < 1e-12 * scale)
        throw SingularChannel("precode: Gram matrix numerically singular");
    // gram^{-1} h_hat through the triangular factors, then transpose.
    const arma::cx_mat y = arma::solve(arma::trimatl(r.t()), h_hat);
    const arma::cx_mat x = arma::solve(arma::trimatu(r), y);
    return x.t();
}

// Effective beamformed gain matrix Gamma with gamma_mi = beta h_m^T u_i,
// where H = A G^T C couples estimation error and NRC.
inline arma::cx_mat effective_gains(const ChannelRealization &chan, const NrcRealization &nrc_real,
                                    const arma::cx_mat &u, double beta_scale)
{
    const arma::cx_mat h = nrc_real.a * (chan.g.st() * nrc_real.c);
    return beta_scale * (h * u);
}

namespace detail {

struct GainRecords {
    arma::cx_mat gains;  // n x M, gamma_mm per realization
    arma::mat isi;       // n x M, sum_{i != m} |gamma_mi|^2 per realization
    std::uint64_t singular_redraws = 0;
};

// Runs the realization loop; records indexed by realization, so worker
// scheduling cannot affect the result.
inline GainRecords accumulate_gains(const SystemConfig &cfg, const NrcStats &nrc,
                                    PrecoderKind kind, std::uint64_t n, std::uint64_t seed,
                                    const McOptions &opts)
{
    const int m_tot = cfg.m_tot();
    const double beta_scale = beta(cfg, kind);

    GainRecords rec;
    rec.gains.set_size(static_cast<arma::uword>(n), static_cast<arma::uword>(m_tot));
    rec.isi.set_size(static_cast<arma::uword>(n), static_cast<arma::uword>(m_tot));

    NrcRealization frozen;
    if (opts.freeze_nrc) {
        RngStream stream = RngStream::derive(seed, stream_frozen_nrc);
        frozen = sample_nrc(cfg, nrc, stream);
    }

    std::atomic<std::uint64_t> redraws{0};
    std::mutex failure_mutex;
    std::exception_ptr failure;

    auto worker = [&](std::uint64_t begin, std::uint64_t end) {
        try {
            for (std::uint64_t r = begin; r < end; ++r) {
                arma::cx_mat gamma;
                for (std::uint64_t retry = 0;; ++retry) {
                    if (retry > 64)
                        throw SingularChannel("estimate_sinr: persistent singular channel");
                    RngStream stream = RngStream::derive(seed, r, retry);
                    const ChannelRealization chan = sample_channel(cfg, stream);
                    try {
                        const arma::cx_mat u = precode(chan.g_hat, kind);
                        const NrcRealization nr =
                            opts.freeze_nrc ? frozen : sample_nrc(cfg, nrc, stream);
                        gamma = effective_gains(chan, nr, u, beta_scale);
                        break;
                    } catch (const SingularChannel &) {
                        redraws.fetch_add(1, std::memory_order_relaxed);
                    }
                }
                for (int m = 0; m < m_tot; ++m) {
                    const arma::uword um = static_cast<arma::uword>(m);
                    rec.gains(static_cast<arma::uword>(r), um) = gamma(um, um);
                    double acc = 0.0;
                    for (int i = 0; i < m_tot; ++i)
                        if (i != m)
                            acc += std::norm(gamma(um, static_cast<arma::uword>(i)));
                    rec.isi(static_cast<arma::uword>(r), um) = acc;
                }
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure)
                failure = std::current_exception();
        }
    };

    const unsigned workers =
        static_cast<unsigned>(std::min<std::uint64_t>(resolve_threads(opts.threads), n));
    if (workers <= 1) {
        worker(0, n);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            const std::uint64_t begin = n * w / workers;
            const std::uint64_t end = n * (w + 1) / workers;
            pool.emplace_back(worker, begin, end);
        }
        for (auto &t : pool)
            t.join();
    }
    if (failure)
        std::rethrow_exception(failure);

    rec.singular_redraws = redraws.load();
    return rec;
}

inline double quantile_sorted(const std::vector<double> &sorted, double p)
{
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

} // namespace detail

// Empirical per-antenna SINR with bootstrap confidence half-widths.
// Bit-for-bit reproducible from (seed, cfg, nrc, kind, n) for any worker
// count: realizations own counter-derived substreams and the reduction runs
// in realization order on the completed record arrays.
inline McEstimate estimate_sinr(const SystemConfig &cfg, const NrcStats &nrc, PrecoderKind kind,
                                std::uint64_t n, std::uint64_t seed, const McOptions &opts = {})
{
    validate_config(cfg);
    validate_stats(nrc);
    if (n < 2)
        throw InsufficientRealizations("estimate_sinr: need at least 2 realizations");
    if (n >= (1ull << 32))
        throw RangeError("estimate_sinr: realization count exceeds the substream space");

    const detail::GainRecords rec = detail::accumulate_gains(cfg, nrc, kind, n, seed, opts);
    const int m_tot = cfg.m_tot();
    const double rd = cfg.rho_d;
    const double inv_n = 1.0 / static_cast<double>(n);

    McEstimate est;
    est.n_realizations = n;
    est.seed = seed;
    est.singular_redraws = rec.singular_redraws;
    est.useful_power.resize(static_cast<std::size_t>(m_tot));
    est.var_si.resize(static_cast<std::size_t>(m_tot));
    est.var_isi.resize(static_cast<std::size_t>(m_tot));
    est.sinr.resize(static_cast<std::size_t>(m_tot));
    est.ci_halfwidth.resize(static_cast<std::size_t>(m_tot));

    for (int m = 0; m < m_tot; ++m) {
        const arma::uword um = static_cast<arma::uword>(m);
        std::complex<double> mean{0.0, 0.0};
        double mean_sq = 0.0;
        double mean_isi = 0.0;
        for (std::uint64_t r = 0; r < n; ++r) {
            const std::complex<double> g = rec.gains(static_cast<arma::uword>(r), um);
            mean += g;
            mean_sq += std::norm(g);
            mean_isi += rec.isi(static_cast<arma::uword>(r), um);
        }
        mean *= inv_n;
        mean_sq *= inv_n;
        mean_isi *= inv_n;
        const double var = (mean_sq - std::norm(mean)) * static_cast<double>(n) /
                           static_cast<double>(n - 1);
        const std::size_t sm = static_cast<std::size_t>(m);
        est.useful_power[sm] = rd * std::norm(mean);
        est.var_si[sm] = rd * std::max(var, 0.0);
        est.var_isi[sm] = rd * mean_isi;
        est.sinr[sm] = est.useful_power[sm] / (est.var_si[sm] + est.var_isi[sm] + 1.0);
    }

    // Nonparametric bootstrap over the per-realization gain records;
    // half-width of the 2.5%..97.5% percentile interval.
    constexpr int n_resamples = 200;
    RngStream boot = RngStream::derive(seed, detail::stream_bootstrap);
    std::vector<std::vector<double>> resampled(
        static_cast<std::size_t>(m_tot), std::vector<double>(n_resamples));
    std::vector<std::uint64_t> idx(static_cast<std::size_t>(n));
    for (int b = 0; b < n_resamples; ++b) {
        for (std::uint64_t j = 0; j < n; ++j)
            idx[static_cast<std::size_t>(j)] = boot.next_index(n);
        for (int m = 0; m < m_tot; ++m) {
            const arma::uword um = static_cast<arma::uword>(m);
            std::complex<double> mean{0.0, 0.0};
            double mean_sq = 0.0;
            double mean_isi = 0.0;
            for (std::uint64_t j = 0; j < n; ++j) {
                const std::complex<double> g =
                    rec.gains(static_cast<arma::uword>(idx[static_cast<std::size_t>(j)]), um);
                mean += g;
                mean_sq += std::norm(g);
                mean_isi += rec.isi(static_cast<arma::uword>(idx[static_cast<std::size_t>(j)]), um);
            }
            mean *= inv_n;
            mean_sq *= inv_n;
            mean_isi *= inv_n;
            const double var = std::max((mean_sq - std::norm(mean)) * static_cast<double>(n) /
                                            static_cast<double>(n - 1),
                                        0.0);
            resampled[static_cast<std::size_t>(m)][static_cast<std::size_t>(b)] =
                rd * std::norm(mean) / (rd * var + rd * mean_isi + 1.0);
        }
    }
    for (int m = 0; m < m_tot; ++m) {
        std::vector<double> &v = resampled[static_cast<std::size_t>(m)];
        std::sort(v.begin(), v.end());
        est.ci_halfwidth[static_cast<std::size_t>(m)] =
            0.5 * (detail::quantile_sorted(v, 0.975) - detail::quantile_sorted(v, 0.025));
    }
    return est;
}

// Same accumulation, returning the SI/ISI split for comparison against the
// closed-form per-term variances.
struct InterferenceSplit {
    std::vector<double> var_si;
    std::vector<double> var_isi;
};

inline InterferenceSplit interference_decomposition(const SystemConfig &cfg, const NrcStats &nrc,
                                                    PrecoderKind kind, std::uint64_t n,
                                                    std::uint64_t seed, const McOptions &opts = {})
{
    const McEstimate est = estimate_sinr(cfg, nrc, kind, n, seed, opts);
    return {est.var_si, est.var_isi};
}

} // namespace nrcsim

#endif
