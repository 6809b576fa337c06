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
// Counter-based random streams for reproducible parallel Monte Carlo.
// Each work item derives its own stream from (master seed, item index), so
// results are bit-identical for any worker count. The generator is the
// SplitMix64 output function applied to a keyed counter; normals come from
// Box-Muller on top of it (no implementation-defined std distributions).

#ifndef nrcsim_rng_H
#define nrcsim_rng_H

#include <cmath>
#include <complex>
#include <cstdint>

namespace nrcsim {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t z)
{
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline std::uint64_t mix_key(std::uint64_t key, std::uint64_t salt)
{
    return splitmix64(splitmix64(key) ^ (salt + 0x9E3779B97F4A7C15ull + (key << 6) + (key >> 2)));
}

} // namespace detail

class RngStream {
  public:
    explicit RngStream(std::uint64_t key) : key_(detail::splitmix64(key)) {}

    // Substream for work item (a) or sub-item (a, b) of a master seed.
    static RngStream derive(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0)
    {
        return RngStream(detail::mix_key(detail::mix_key(master, a), b));
    }

    std::uint64_t next_u64() { return detail::splitmix64(key_ + counter_++ * GOLDEN); }

    // Uniform in (0, 1]; never 0, so it is safe under log().
    double next_uniform_pos()
    {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    // Uniform in [0, 1).
    double next_uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Index in [0, n).
    std::uint64_t next_index(std::uint64_t n) { return next_u64() % n; }

    // One standard-normal pair (Box-Muller).
    void next_normal_pair(double &z0, double &z1)
    {
        const double r = std::sqrt(-2.0 * std::log(next_uniform_pos()));
        const double phi = 6.283185307179586476925286766559 * next_uniform();
        z0 = r * std::cos(phi);
        z1 = r * std::sin(phi);
    }

    double next_normal()
    {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double z0, z1;
        next_normal_pair(z0, z1);
        spare_ = z1;
        have_spare_ = true;
        return z0;
    }

    // Circularly symmetric complex Gaussian with the given total variance.
    std::complex<double> next_cnormal(double variance)
    {
        double z0, z1;
        next_normal_pair(z0, z1);
        const double s = std::sqrt(variance * 0.5);
        return {s * z0, s * z1};
    }

  private:
    static constexpr std::uint64_t GOLDEN = 0x9E3779B97F4A7C15ull;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace nrcsim

#endif
