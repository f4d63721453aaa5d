// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ctdplan contributors

#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace ctd {

/// Splittable deterministic RNG (xoshiro256** seeded through splitmix64).
///
/// All randomized components in this project draw from this generator rather
/// than <random>, so results are bit-identical across platforms and standard
/// library implementations.
///
/// Stream derivation: `Rng::derive(master, a, b)` mixes the master seed with
/// two stream identifiers through successive splitmix64 steps. Substreams for
/// different (a, b) pairs are independent, and a substream keyed by row
/// content (see fnv1a_64) is unaffected by rows added elsewhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    static Rng derive(std::uint64_t master, std::uint64_t stream_a, std::uint64_t stream_b = 0);

    std::uint64_t next_u64();

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double();

    /// Uniform integer in [0, bound); unbiased via rejection. bound >= 1.
    std::uint64_t below(std::uint64_t bound);

private:
    std::array<std::uint64_t, 4> state_;
};

std::uint64_t splitmix64(std::uint64_t& state);

/// FNV-1a 64-bit hash; used to key per-row random substreams by row content.
std::uint64_t fnv1a_64(std::string_view data);

/// Standard normal deviate (Marsaglia polar method).
double sample_normal(Rng& rng);

/// Gamma(shape, rate) deviate via Marsaglia-Tsang squeeze; shape, rate > 0.
double sample_gamma(Rng& rng, double shape, double rate);

/// Beta(a, b) deviate as X/(X+Y) for X~Gamma(a,1), Y~Gamma(b,1).
double sample_beta(Rng& rng, double a, double b);

/// Bernoulli(theta) score in {0, 1}.
int sample_bernoulli(Rng& rng, double theta);

}  // namespace ctd
