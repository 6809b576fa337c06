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
// Declarative parameter sweeps pairing the closed-form evaluator with the
// Monte Carlo simulator, plus the figure-class studies (single-parameter
// sensitivity, optimal user count, maximum tolerable NRC level). Every
// runner is a pure function of its SweepSpec: rerunning yields identical
// rows, and Monte Carlo grid points draw from per-(grid-point, realization)
// substreams of the master seed.

#ifndef nrcsim_sweep_H
#define nrcsim_sweep_H

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "analytic.hpp"
#include "montecarlo.hpp"
#include "search.hpp"
#include "units.hpp"

namespace nrcsim {

enum class SweepVariable {
    rho_d_db,
    n_bs,
    nrc_level_db,
    k_users,
    per_ue_antennas,
    single_nrc_param,
};

inline const char *to_string(SweepVariable v)
{
    switch (v) {
    case SweepVariable::rho_d_db: return "rho_d_db";
    case SweepVariable::n_bs: return "n_bs";
    case SweepVariable::nrc_level_db: return "nrc_level_db";
    case SweepVariable::k_users: return "k_users";
    case SweepVariable::per_ue_antennas: return "per_ue_antennas";
    case SweepVariable::single_nrc_param: return "single_nrc_param";
    }
    return "?";
}

enum class Engine { analytic, mc };

inline const char *to_string(Engine e)
{
    return e == Engine::analytic ? "analytic" : "mc";
}

struct SweepSpec {
    SystemConfig base;
    NrcStats nrc_base;
    SweepVariable variable = SweepVariable::rho_d_db;
    std::vector<double> grid;
    CouplingRule coupling;
    std::vector<PrecoderKind> precoders{PrecoderKind::zf, PrecoderKind::mrt};
    std::vector<Engine> engines{Engine::analytic};
    std::uint64_t mc_realizations = 1000;
    std::uint64_t seed = 1;
    unsigned threads = 0;
    bool freeze_nrc = false;
    // Which statistic a single_nrc_param sweep drives: one of sigma2_c_od,
    // sigma2_a_d, sigma2_a_od, sigma2_c_d_joint (delta2 follows sigma2),
    // sigma2_c_d (delta2 pinned to zero).
    std::string nrc_param = "sigma2_c_od";

    bool operator==(const SweepSpec &) const = default;
};

// One emitted data point. `antenna` is a 1-based index, "mean" (per-antenna
// arithmetic means; SINR averaged in the dB domain, display convenience
// only) or "sum" (sum rate and system spectral efficiency). Absent fields
// stay empty in the CSV.
struct SweepRow {
    std::string variable;
    double value = 0.0;
    PrecoderKind precoder = PrecoderKind::zf;
    std::string engine;
    std::string antenna;
    std::optional<double> sinr_db;
    std::optional<double> rate;
    std::optional<double> se;
    std::optional<double> alpha;
    std::optional<double> ci_halfwidth;
};

namespace detail {

template <typename Fn> auto with_grid_context(double value, Fn &&fn)
{
    try {
        return fn();
    } catch (const DimensionError &e) {
        throw DimensionError("grid point " + std::to_string(value) + ": " + e.what());
    } catch (const PilotError &e) {
        throw PilotError("grid point " + std::to_string(value) + ": " + e.what());
    } catch (const RangeError &e) {
        throw RangeError("grid point " + std::to_string(value) + ": " + e.what());
    } catch (const StatsError &e) {
        throw StatsError("grid point " + std::to_string(value) + ": " + e.what());
    }
}

inline NrcStats single_param_stats(const std::string &name, double level)
{
    NrcStats s;
    if (name == "sigma2_c_od")
        s.sigma2_c_od = level;
    else if (name == "sigma2_a_d")
        s.sigma2_a_d = level;
    else if (name == "sigma2_a_od")
        s.sigma2_a_od = level;
    else if (name == "sigma2_c_d_joint") {
        s.sigma2_c_d = level;
        s.delta2_c_d = level;
    } else if (name == "sigma2_c_d")
        s.sigma2_c_d = level;
    else
        throw RangeError("unknown NRC parameter name: " + name);
    return s;
}

} // namespace detail

// Config and statistics at one grid point.
inline std::pair<SystemConfig, NrcStats> instantiate(const SweepSpec &spec, double value)
{
    SystemConfig cfg = spec.base;
    NrcStats nrc = spec.nrc_base;
    switch (spec.variable) {
    case SweepVariable::rho_d_db:
        cfg.rho_d = db_to_linear(value);
        break;
    case SweepVariable::n_bs:
        cfg.n_bs = static_cast<int>(std::llround(value));
        break;
    case SweepVariable::nrc_level_db:
        nrc = spec.coupling.at_level(db_to_linear(value));
        break;
    case SweepVariable::k_users: {
        const int k = static_cast<int>(std::llround(value));
        // pilot budget tracks the user count, tau_u = M_tot = K
        cfg = SystemConfig::uniform(spec.base.n_bs, k, 1, k, spec.base.rho_u, spec.base.rho_d,
                                    spec.base.coherence_symbols);
        break;
    }
    case SweepVariable::per_ue_antennas: {
        const int per_ue = static_cast<int>(std::llround(value));
        const int m_tot = spec.base.m_tot();
        if (per_ue < 1 || m_tot % per_ue != 0)
            throw DimensionError("per_ue_antennas = " + std::to_string(per_ue) +
                                 " does not divide M_tot = " + std::to_string(m_tot));
        cfg = SystemConfig::uniform(spec.base.n_bs, m_tot / per_ue, per_ue, spec.base.tau_u,
                                    spec.base.rho_u, spec.base.rho_d,
                                    spec.base.coherence_symbols);
        break;
    }
    case SweepVariable::single_nrc_param:
        nrc = detail::single_param_stats(spec.nrc_param, db_to_linear(value));
        break;
    }
    return {cfg, nrc};
}

inline void validate_spec(const SweepSpec &spec)
{
    if (spec.grid.empty())
        throw RangeError("sweep: grid must be non-empty");
    if (spec.grid.size() > 1) {
        const bool inc = spec.grid[1] > spec.grid[0];
        for (std::size_t i = 1; i < spec.grid.size(); ++i) {
            const bool step_inc = spec.grid[i] > spec.grid[i - 1];
            if (spec.grid[i] == spec.grid[i - 1] || step_inc != inc)
                throw RangeError("sweep: grid must be strictly monotone");
        }
    }
    if (spec.precoders.empty())
        throw RangeError("sweep: at least one precoder required");
    if (spec.engines.empty())
        throw RangeError("sweep: at least one engine required");
    validate_stats(spec.coupling.at_level(1.0));
    for (double v : spec.grid)
        detail::with_grid_context(v, [&] {
            auto [cfg, nrc] = instantiate(spec, v);
            validate_config(cfg);
            validate_stats(nrc);
            return 0;
        });
}

namespace detail {

inline void append_aggregates(std::vector<SweepRow> &rows, const SweepRow &proto,
                              const std::vector<SweepRow> &antenna_rows,
                              std::optional<double> sum_rate, std::optional<double> sum_se)
{
    SweepRow mean = proto;
    mean.antenna = "mean";
    auto mean_of = [&](std::optional<double> SweepRow::*field) -> std::optional<double> {
        double acc = 0.0;
        int count = 0;
        for (const SweepRow &r : antenna_rows)
            if (r.*field) {
                acc += *(r.*field);
                ++count;
            }
        if (count == 0)
            return std::nullopt;
        return acc / count;
    };
    mean.sinr_db = mean_of(&SweepRow::sinr_db);
    mean.rate = mean_of(&SweepRow::rate);
    mean.se = mean_of(&SweepRow::se);
    mean.alpha = mean_of(&SweepRow::alpha);
    mean.ci_halfwidth = mean_of(&SweepRow::ci_halfwidth);
    rows.push_back(std::move(mean));

    SweepRow sum = proto;
    sum.antenna = "sum";
    sum.rate = sum_rate;
    sum.se = sum_se;
    rows.push_back(std::move(sum));
}

} // namespace detail

// Rows for every (grid value x precoder x engine x antenna-or-aggregate),
// grid-major order. Analytic rows are exact; mc rows carry bootstrap CIs
// and use the analytic reciprocal-case SINR as the alpha reference.
inline std::vector<SweepRow> run_sweep(const SweepSpec &spec)
{
    validate_spec(spec);
    std::vector<SweepRow> rows;

    for (std::size_t gi = 0; gi < spec.grid.size(); ++gi) {
        const double value = spec.grid[gi];
        auto [cfg, nrc] = instantiate(spec, value);
        const double overhead = 1.0 - cfg.tau_u / static_cast<double>(cfg.coherence_symbols);

        for (PrecoderKind kind : spec.precoders) {
            const AnalyticResult rc = evaluate(cfg, NrcStats{}, kind);
            for (Engine engine : spec.engines) {
                SweepRow proto;
                proto.variable = to_string(spec.variable);
                if (spec.variable == SweepVariable::single_nrc_param)
                    proto.variable = spec.nrc_param + "_db";
                proto.value = value;
                proto.precoder = kind;
                proto.engine = to_string(engine);

                std::vector<SweepRow> antenna_rows;
                double total_rate = 0.0;
                std::vector<double> sinr_lin;
                std::vector<std::optional<double>> ci;
                if (engine == Engine::analytic) {
                    const AnalyticResult res = evaluate(cfg, nrc, kind);
                    sinr_lin = res.sinr;
                    ci.assign(sinr_lin.size(), std::nullopt);
                } else {
                    McOptions opts;
                    opts.threads = spec.threads;
                    opts.freeze_nrc = spec.freeze_nrc;
                    const McEstimate est =
                        estimate_sinr(cfg, nrc, kind, spec.mc_realizations,
                                      RngStream::derive(spec.seed, gi).next_u64(), opts);
                    sinr_lin = est.sinr;
                    ci.reserve(est.ci_halfwidth.size());
                    for (double h : est.ci_halfwidth)
                        ci.push_back(h);
                }
                for (std::size_t m = 0; m < sinr_lin.size(); ++m) {
                    SweepRow r = proto;
                    r.antenna = std::to_string(m + 1);
                    const double rate_m = std::log2(1.0 + sinr_lin[m]);
                    total_rate += rate_m;
                    r.sinr_db = linear_to_db(sinr_lin[m]);
                    r.rate = rate_m;
                    r.se = overhead * rate_m;
                    r.alpha = (rc.sinr[m] - sinr_lin[m]) / rc.sinr[m];
                    r.ci_halfwidth = ci[m];
                    antenna_rows.push_back(std::move(r));
                }
                for (const SweepRow &r : antenna_rows)
                    rows.push_back(r);
                detail::append_aggregates(rows, proto, antenna_rows, total_rate,
                                          overhead * total_rate);
            }
        }
    }
    return rows;
}

// Sensitivity to one NRC statistic at a time (all others zero), for the
// four parameter groups: C' off-diagonal variance, A' diagonal variance,
// C' diagonal variance with fully tracking cross-correlation, and C'
// diagonal variance alone. Grid values are dB levels of the driven
// statistic; alpha per antenna lands in the alpha column.
inline std::vector<SweepRow> run_single_param_sensitivity(const SweepSpec &spec)
{
    static const char *groups[] = {"sigma2_c_od", "sigma2_a_d", "sigma2_c_d_joint",
                                   "sigma2_c_d"};
    std::vector<SweepRow> rows;
    for (const char *group : groups) {
        SweepSpec sub = spec;
        sub.variable = SweepVariable::single_nrc_param;
        sub.nrc_param = group;
        for (SweepRow &r : run_sweep(sub))
            rows.push_back(std::move(r));
    }
    return rows;
}

struct KoptRow {
    double nrc_level_db = 0.0;
    double rho_d = 0.0;  // linear
    PrecoderKind precoder = PrecoderKind::zf;
    int k_opt = 0;
};

// Optimal scheduled single-antenna user count over an NRC-level grid, at
// the two DL SNR operating points of the companion figure (0 dB and 20 dB).
inline std::vector<KoptRow> run_kopt_study(const SweepSpec &spec,
                                           const std::vector<double> &rho_d_grid = {1.0, 100.0})
{
    if (spec.grid.empty())
        throw RangeError("kopt study: grid must be non-empty");
    std::vector<KoptRow> rows;
    for (double rho_d : rho_d_grid)
        for (double level_db : spec.grid)
            for (PrecoderKind kind : spec.precoders) {
                const NrcStats nrc = spec.coupling.at_level(db_to_linear(level_db));
                rows.push_back(
                    {level_db, rho_d, kind, k_opt_search(spec.base, nrc, kind, rho_d)});
            }
    return rows;
}

struct MaxNrcRow {
    double target_sinr_db = 0.0;
    double rho_d = 0.0;  // linear
    PrecoderKind precoder = PrecoderKind::zf;
    bool feasible = false;
    double max_level_db = 0.0;      // meaningful when feasible
    double achieved_sinr_db = 0.0;  // re-evaluated SINR at the returned level
};

// Maximum tolerable NRC level per target SINR, per precoder, at the same
// two DL SNR operating points. Infeasible targets are flagged, not fatal.
inline std::vector<MaxNrcRow> run_max_nrc_study(const SweepSpec &spec,
                                                const std::vector<double> &targets_db,
                                                const std::vector<double> &rho_d_grid = {1.0,
                                                                                         100.0})
{
    if (targets_db.empty())
        throw RangeError("max-nrc study: target grid must be non-empty");
    std::vector<MaxNrcRow> rows;
    for (double rho_d : rho_d_grid)
        for (double target_db : targets_db)
            for (PrecoderKind kind : spec.precoders) {
                SystemConfig cfg = spec.base;
                cfg.rho_d = rho_d;
                MaxNrcRow row;
                row.target_sinr_db = target_db;
                row.rho_d = rho_d;
                row.precoder = kind;
                try {
                    const MaxNrcResult res =
                        max_tolerable_nrc(cfg, db_to_linear(target_db), kind, spec.coupling);
                    row.feasible = true;
                    row.max_level_db = linear_to_db(res.level);
                    row.achieved_sinr_db = linear_to_db(res.sinr_at_level);
                } catch (const InfeasibleTarget &) {
                    row.feasible = false;
                }
                rows.push_back(row);
            }
    return rows;
}

// N-sweep rows plus "asymptote" engine rows carrying the large-N saturation
// reference at every grid point (constant line; emitted per point so the
// CSV plots directly against the analytic curves).
inline std::vector<SweepRow> run_asymptote_sweep(const SweepSpec &spec)
{
    if (spec.variable != SweepVariable::n_bs)
        throw RangeError("asymptote sweep: variable must be n_bs");
    SweepSpec analytic_only = spec;
    analytic_only.engines = {Engine::analytic};
    std::vector<SweepRow> rows = run_sweep(analytic_only);

    for (double value : spec.grid) {
        auto [cfg, nrc] = instantiate(spec, value);
        const double overhead = 1.0 - cfg.tau_u / static_cast<double>(cfg.coherence_symbols);
        for (PrecoderKind kind : spec.precoders) {
            SweepRow proto;
            proto.variable = to_string(spec.variable);
            proto.value = value;
            proto.precoder = kind;
            proto.engine = "asymptote";
            std::vector<SweepRow> antenna_rows;
            double total_rate = 0.0;
            bool bounded_all = true;
            for (int m = 0; m < cfg.m_tot(); ++m) {
                SweepRow r = proto;
                r.antenna = std::to_string(m + 1);
                const SaturationLimit lim = asymptotic_sinr(cfg, nrc, m);
                if (lim.bounded) {
                    const double rate_m = std::log2(1.0 + lim.sinr);
                    total_rate += rate_m;
                    r.sinr_db = linear_to_db(lim.sinr);
                    r.rate = rate_m;
                    r.se = overhead * rate_m;
                } else {
                    bounded_all = false;
                }
                antenna_rows.push_back(std::move(r));
            }
            for (const SweepRow &r : antenna_rows)
                rows.push_back(r);
            if (bounded_all)
                detail::append_aggregates(rows, proto, antenna_rows, total_rate,
                                          overhead * total_rate);
            else
                detail::append_aggregates(rows, proto, antenna_rows, std::nullopt, std::nullopt);
        }
    }
    return rows;
}

} // namespace nrcsim

#endif
