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

#include <catch_amalgamated.hpp>

#include <cmath>

#include <nrcsim/analytic.hpp>
#include <nrcsim/montecarlo.hpp>
#include <nrcsim/units.hpp>

using namespace nrcsim;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

SystemConfig baseline(double rho_d = 100.0)
{
    return SystemConfig::uniform(100, 20, 1, 20, 1.0, rho_d, 196);
}

NrcStats baseline_nrc()
{
    NrcStats s;
    s.sigma2_a_d = db_to_linear(-20.0);
    s.sigma2_c_d = db_to_linear(-20.0);
    s.sigma2_c_od = db_to_linear(-30.0);
    s.delta2_c_d = db_to_linear(-30.0);
    return s;
}

} // namespace

TEST_CASE("transmit normalization scalars")
{
    auto cfg = baseline();
    REQUIRE_THAT(beta(cfg, PrecoderKind::zf), WithinRel(std::sqrt(80.0 * 20.0 / (20.0 * 21.0)), 1e-14));
    REQUIRE_THAT(beta(cfg, PrecoderKind::mrt), WithinRel(std::sqrt(21.0 / (100.0 * 20.0 * 20.0)), 1e-14));
}

TEST_CASE("channel decomposition holds exactly per realization")
{
    auto cfg = SystemConfig::uniform(40, 4, 2, 8, 1.0, 10.0, 32);
    RngStream stream(11);
    const auto chan = sample_channel(cfg, stream);
    REQUIRE(arma::norm(chan.g - (chan.g_hat + chan.eps.st()), "fro") == 0.0);
    REQUIRE(chan.g.n_rows == 40);
    REQUIRE(chan.g.n_cols == 8);
    REQUIRE(chan.eps.n_rows == 8);
    REQUIRE(chan.eps.n_cols == 40);
}

TEST_CASE("channel entry variances and independence at ensemble level")
{
    auto cfg = SystemConfig::uniform(50, 10, 1, 10, 2.0, 10.0, 64);  // tau rho_u = 20
    const double var_hat = 20.0 / 21.0;
    const double var_eps = 1.0 / 21.0;

    RngStream stream(5);
    double sum_hat = 0.0, sum_eps = 0.0, sum_g = 0.0;
    std::complex<double> cross{0.0, 0.0};
    const int draws = 240;
    const double entries = draws * 500.0;
    for (int d = 0; d < draws; ++d) {
        const auto chan = sample_channel(cfg, stream);
        sum_hat += arma::accu(arma::square(arma::abs(chan.g_hat)));
        sum_eps += arma::accu(arma::square(arma::abs(chan.eps)));
        sum_g += arma::accu(arma::square(arma::abs(chan.g)));
        cross += arma::accu(chan.g_hat % arma::conj(chan.eps.st()));  // Cov(ghat_ij, eps_ji) = 0
    }
    // |x|^2 of a CN(0, v) entry is exponential with std v: 3-sigma bands
    REQUIRE_THAT(sum_hat / entries, WithinAbs(var_hat, 3.0 * var_hat / std::sqrt(entries)));
    REQUIRE_THAT(sum_eps / entries, WithinAbs(var_eps, 3.0 * var_eps / std::sqrt(entries)));
    REQUIRE_THAT(sum_g / entries, WithinAbs(1.0, 3.0 / std::sqrt(entries)));
    REQUIRE(std::abs(cross) / entries < 3.0 * std::sqrt(var_hat * var_eps) / std::sqrt(entries));
}

TEST_CASE("estimation error power vanishes in the perfect-CSI limit")
{
    auto cfg = SystemConfig::uniform(30, 3, 1, 3, 1e9, 10.0, 64);
    RngStream stream(1);
    const auto chan = sample_channel(cfg, stream);
    REQUIRE(arma::accu(arma::square(arma::abs(chan.eps))) / (3.0 * 30.0) < 1e-8);
}

TEST_CASE("zero statistics produce exact identity NRC matrices")
{
    auto cfg = SystemConfig::uniform(25, 4, 1, 4, 1.0, 10.0, 16);
    RngStream stream(2);
    const auto real = sample_nrc(cfg, NrcStats{}, stream);
    REQUIRE(arma::norm(real.a - arma::eye<arma::cx_mat>(4, 4), "fro") == 0.0);
    REQUIRE(arma::norm(real.c - arma::eye<arma::cx_mat>(25, 25), "fro") == 0.0);
}

TEST_CASE("fully correlated C' diagonal collapses to the common factor")
{
    auto cfg = SystemConfig::uniform(16, 2, 1, 2, 1.0, 10.0, 16);
    NrcStats nrc;
    nrc.sigma2_c_d = 0.04;
    nrc.delta2_c_d = 0.04;
    RngStream stream(3);
    const auto real = sample_nrc(cfg, nrc, stream);
    const arma::cx_vec d = real.c.diag();
    for (arma::uword i = 1; i < d.n_elem; ++i)
        REQUIRE(std::abs(d(i) - d(0)) < 1e-15);
}

TEST_CASE("A' block structure respects UE boundaries")
{
    auto cfg = SystemConfig::make(30, {2, 3}, 5, 1.0, 10.0, 16);
    NrcStats nrc;
    nrc.sigma2_a_d = 0.01;
    nrc.sigma2_a_od = 0.01;
    RngStream stream(4);
    const auto real = sample_nrc(cfg, nrc, stream);
    // cross-UE entries must stay exactly zero
    for (arma::uword i = 0; i < 2; ++i)
        for (arma::uword j = 2; j < 5; ++j) {
            REQUIRE(real.a(i, j) == std::complex<double>(0.0, 0.0));
            REQUIRE(real.a(j, i) == std::complex<double>(0.0, 0.0));
        }
    // within-block entries perturbed around the identity
    REQUIRE(std::abs(real.a(0, 1)) > 0.0);
    REQUIRE(std::abs(real.a(0, 0) - 1.0) > 0.0);
}

TEST_CASE("C' diagonal pairwise cross-correlation matches the construction")
{
    auto cfg = SystemConfig::uniform(4, 1, 1, 1, 1.0, 10.0, 8);
    NrcStats nrc;
    nrc.sigma2_c_d = 1e-2;
    nrc.delta2_c_d = 1e-3;
    RngStream stream(6);
    const int draws = 100000;
    std::complex<double> acc{0.0, 0.0};
    double var_acc = 0.0;
    for (int d = 0; d < draws; ++d) {
        const auto real = sample_nrc(cfg, nrc, stream);
        const std::complex<double> c11 = real.c(0, 0) - 1.0;
        const std::complex<double> c22 = real.c(1, 1) - 1.0;
        acc += c11 * std::conj(c22);
        var_acc += std::norm(c11);
    }
    // Var(c11 conj(c22)) ~ sigma^4 per draw; 3-sigma band around delta2
    const double se = nrc.sigma2_c_d / std::sqrt(double(draws));
    REQUIRE_THAT(acc.real() / draws, WithinAbs(nrc.delta2_c_d, 3.0 * se));
    REQUIRE(std::fabs(acc.imag() / draws) < 3.0 * se);
    REQUIRE_THAT(var_acc / draws, WithinAbs(nrc.sigma2_c_d, 3.0 * se));
}

TEST_CASE("sample_nrc rejects delta2 above sigma2")
{
    auto cfg = SystemConfig::uniform(8, 1, 1, 1, 1.0, 10.0, 8);
    NrcStats nrc;
    nrc.sigma2_c_d = 1e-3;
    nrc.delta2_c_d = 1e-2;
    RngStream stream(7);
    REQUIRE_THROWS_AS(sample_nrc(cfg, nrc, stream), StatsError);
}

TEST_CASE("ZF precoder annihilates the estimated channel cross terms")
{
    auto cfg = SystemConfig::uniform(48, 6, 2, 12, 1.0, 10.0, 32);
    RngStream stream(8);
    const auto chan = sample_channel(cfg, stream);
    const arma::cx_mat u = precode(chan.g_hat, PrecoderKind::zf);
    const arma::cx_mat prod = chan.g_hat.st() * u;
    REQUIRE(arma::norm(prod - arma::eye<arma::cx_mat>(12, 12), "fro") /
                arma::norm(arma::eye<arma::cx_mat>(12, 12), "fro") <
            1e-8);
}

TEST_CASE("MRT precoder is the conjugate transpose of the estimate")
{
    auto cfg = SystemConfig::uniform(32, 5, 1, 5, 1.0, 10.0, 16);
    RngStream stream(9);
    const auto chan = sample_channel(cfg, stream);
    const arma::cx_mat u = precode(chan.g_hat, PrecoderKind::mrt);
    REQUIRE(arma::norm(u - chan.g_hat.st().t(), "fro") == 0.0);
}

TEST_CASE("rank-one channel makes ZF and MRT beams parallel")
{
    auto cfg = SystemConfig::uniform(16, 1, 1, 1, 1.0, 10.0, 8);
    RngStream stream(10);
    const auto chan = sample_channel(cfg, stream);
    const arma::cx_vec zf = precode(chan.g_hat, PrecoderKind::zf);
    const arma::cx_vec mrt = precode(chan.g_hat, PrecoderKind::mrt);
    const double cosine = std::abs(arma::cdot(zf, mrt)) / (arma::norm(zf) * arma::norm(mrt));
    REQUIRE_THAT(cosine, WithinAbs(1.0, 1e-12));
}

TEST_CASE("singular estimated channel is rejected")
{
    arma::cx_mat g_hat(10, 2, arma::fill::zeros);
    g_hat.col(0).fill(std::complex<double>(1.0, 0.0));
    g_hat.col(1) = g_hat.col(0);  // rank deficient
    REQUIRE_THROWS_AS(precode(g_hat, PrecoderKind::zf), SingularChannel);
}

TEST_CASE("transmit energy normalizes to one on average")
{
    auto cfg = SystemConfig::uniform(64, 8, 1, 8, 1.0, 10.0, 32);
    for (auto kind : {PrecoderKind::zf, PrecoderKind::mrt}) {
        RngStream stream(kind == PrecoderKind::zf ? 20 : 21);
        const double b2 = beta(cfg, kind) * beta(cfg, kind);
        const int draws = 400;
        double sum = 0.0, sum2 = 0.0;
        for (int d = 0; d < draws; ++d) {
            const auto chan = sample_channel(cfg, stream);
            const arma::cx_mat u = precode(chan.g_hat, kind);
            const double e = b2 * std::real(arma::trace(u.t() * u));
            sum += e;
            sum2 += e * e;
        }
        const double mean = sum / draws;
        const double se = std::sqrt((sum2 / draws - mean * mean) / draws);
        REQUIRE_THAT(mean, WithinAbs(1.0, 4.0 * se + 1e-3));
    }
}

TEST_CASE("effective gains with identity NRC and perfect CSI collapse to beta I")
{
    auto cfg = SystemConfig::uniform(40, 5, 1, 5, 1.0, 10.0, 32);
    RngStream stream(12);
    ChannelRealization chan = sample_channel(cfg, stream);
    chan.eps.zeros();
    chan.g = chan.g_hat;  // perfect CSI
    NrcRealization ident;
    ident.a = arma::eye<arma::cx_mat>(5, 5);
    ident.c = arma::eye<arma::cx_mat>(40, 40);
    const double b = beta(cfg, PrecoderKind::zf);
    const arma::cx_mat gamma = effective_gains(chan, ident, precode(chan.g_hat, PrecoderKind::zf), b);
    REQUIRE(arma::norm(gamma - b * arma::eye<arma::cx_mat>(5, 5), "fro") < 1e-10);
}

TEST_CASE("single-antenna MRT gain is the channel norm")
{
    auto cfg = SystemConfig::uniform(24, 1, 1, 1, 1.0, 10.0, 8);
    RngStream stream(13);
    ChannelRealization chan = sample_channel(cfg, stream);
    chan.eps.zeros();
    chan.g = chan.g_hat;
    NrcRealization ident;
    ident.a = arma::eye<arma::cx_mat>(1, 1);
    ident.c = arma::eye<arma::cx_mat>(24, 24);
    const double b = beta(cfg, PrecoderKind::mrt);
    const arma::cx_mat gamma =
        effective_gains(chan, ident, precode(chan.g_hat, PrecoderKind::mrt), b);
    const double norm2 = std::pow(arma::norm(chan.g_hat.col(0)), 2.0);
    REQUIRE_THAT(gamma(0, 0).real(), WithinRel(b * norm2, 1e-12));
    REQUIRE_THAT(gamma(0, 0).imag(), WithinAbs(0.0, 1e-12));
}

TEST_CASE("mean ZF own-stream gain stays at beta under NRC")
{
    auto cfg = SystemConfig::uniform(32, 4, 1, 4, 1.0, 10.0, 32);
    NrcStats nrc = baseline_nrc();
    const double b = beta(cfg, PrecoderKind::zf);
    RngStream stream(14);
    const int draws = 2000;
    std::complex<double> acc{0.0, 0.0};
    double spread = 0.0;
    for (int d = 0; d < draws; ++d) {
        const auto chan = sample_channel(cfg, stream);
        const auto nr = sample_nrc(cfg, nrc, stream);
        const arma::cx_mat gamma =
            effective_gains(chan, nr, precode(chan.g_hat, PrecoderKind::zf), b);
        acc += gamma(0, 0);
        spread += std::norm(gamma(0, 0));
    }
    const std::complex<double> mean = acc / double(draws);
    const double sd = std::sqrt(spread / draws - std::norm(mean));
    REQUIRE(std::abs(mean - std::complex<double>(b, 0.0)) < 4.0 * sd / std::sqrt(double(draws)));
}

TEST_CASE("estimate requires at least two realizations")
{
    REQUIRE_THROWS_AS(estimate_sinr(baseline(), NrcStats{}, PrecoderKind::zf, 1, 1),
                      InsufficientRealizations);
}

TEST_CASE("degenerate two-realization ensemble stays finite")
{
    const auto est = estimate_sinr(baseline(), baseline_nrc(), PrecoderKind::zf, 2, 123);
    for (int m = 0; m < 20; ++m) {
        REQUIRE(std::isfinite(est.sinr[static_cast<std::size_t>(m)]));
        REQUIRE(est.sinr[static_cast<std::size_t>(m)] >= 0.0);
        REQUIRE(std::isfinite(est.ci_halfwidth[static_cast<std::size_t>(m)]));
    }
    REQUIRE(est.n_realizations == 2);
}

TEST_CASE("estimates are bit-identical across worker counts")
{
    auto cfg = SystemConfig::uniform(30, 5, 1, 5, 1.0, 10.0, 32);
    NrcStats nrc = baseline_nrc();
    McOptions one;
    one.threads = 1;
    McOptions four;
    four.threads = 4;
    const auto a = estimate_sinr(cfg, nrc, PrecoderKind::mrt, 64, 777, one);
    const auto b = estimate_sinr(cfg, nrc, PrecoderKind::mrt, 64, 777, four);
    REQUIRE(a.sinr == b.sinr);
    REQUIRE(a.useful_power == b.useful_power);
    REQUIRE(a.var_si == b.var_si);
    REQUIRE(a.var_isi == b.var_isi);
    REQUIRE(a.ci_halfwidth == b.ci_halfwidth);
}

TEST_CASE("zero-NRC estimates track the reciprocal closed forms")
{
    auto cfg = baseline();
    for (auto kind : {PrecoderKind::zf, PrecoderKind::mrt}) {
        const auto est = estimate_sinr(cfg, NrcStats{}, kind, 4000, 2026);
        const double expect = sinr(cfg, NrcStats{}, 0, kind);
        for (int m = 0; m < 20; ++m)
            REQUIRE_THAT(est.sinr[static_cast<std::size_t>(m)], WithinRel(expect, 0.05));
        REQUIRE(est.singular_redraws == 0);
    }
}

TEST_CASE("single UE single antenna has exactly zero inter-stream interference")
{
    auto cfg = SystemConfig::uniform(16, 1, 1, 1, 1.0, 10.0, 8);
    const auto est = estimate_sinr(cfg, baseline_nrc(), PrecoderKind::zf, 100, 5);
    REQUIRE(est.var_isi[0] == 0.0);
}

TEST_CASE("SI/ISI split matches the per-term closed forms")
{
    auto cfg = baseline();
    const NrcStats nrc = baseline_nrc();
    for (auto kind : {PrecoderKind::zf, PrecoderKind::mrt}) {
        const auto split = interference_decomposition(cfg, nrc, kind, 10000, 31337);
        const auto ana = appendix_variance_terms(cfg, nrc, 0, kind);
        double si = 0.0, isi = 0.0;
        for (int m = 0; m < 20; ++m) {
            si += split.var_si[static_cast<std::size_t>(m)];
            isi += split.var_isi[static_cast<std::size_t>(m)];
        }
        si /= 20.0;
        isi /= 20.0;
        REQUIRE_THAT(si, WithinRel(ana.var_si, 0.05));
        REQUIRE_THAT(isi, WithinRel(ana.var_isi, 0.05));
    }
}

TEST_CASE("zero-NRC ZF self-interference collapses to the estimation-error term")
{
    auto cfg = baseline();
    const auto split = interference_decomposition(cfg, NrcStats{}, PrecoderKind::zf, 4000, 77);
    // rho_d / (M_tot (tau rho_u + 1)) per antenna
    const double expect = 100.0 / (20.0 * 21.0);
    double si = 0.0;
    for (double v : split.var_si)
        si += v;
    REQUIRE_THAT(si / 20.0, WithinRel(expect, 0.05));
}

TEST_CASE("frozen NRC draws are reproducible and differ from the default mode")
{
    auto cfg = SystemConfig::uniform(24, 3, 1, 3, 1.0, 10.0, 16);
    McOptions frozen;
    frozen.freeze_nrc = true;
    const auto a = estimate_sinr(cfg, baseline_nrc(), PrecoderKind::zf, 200, 9, frozen);
    const auto b = estimate_sinr(cfg, baseline_nrc(), PrecoderKind::zf, 200, 9, frozen);
    const auto c = estimate_sinr(cfg, baseline_nrc(), PrecoderKind::zf, 200, 9);
    REQUIRE(a.sinr == b.sinr);
    REQUIRE(a.sinr != c.sinr);
}
