// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <initializer_list>

namespace cswarm {

/// SplitMix64 finalizer. Used to derive independent stream seeds from a
/// master seed plus a path of integer identifiers.
std::uint64_t mix64(std::uint64_t x);

/// Deterministic, portable PRNG (xoshiro256++) with Box-Muller normals.
/// The standard <random> distributions are implementation-defined, so all
/// draws here are hand-rolled to keep runs byte-identical across toolchains.
class Rng {
  public:
    explicit Rng(std::uint64_t seed);

    /// Derive an independent sub-stream: hash the master seed with a path of
    /// identifiers (module id, trial index, ...). Same path, same stream.
    static Rng derive(std::uint64_t master, std::initializer_list<std::uint64_t> path);

    std::uint64_t next_u64();

    /// Uniform double in [0, 1), 53-bit resolution.
    double uniform();
    /// Uniform double in (0, 1]; safe as a log() argument.
    double uniform_pos();
    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi);

    /// Standard normal via Box-Muller (second value of each pair is cached).
    double normal();
    double normal(double mean, double stddev) { return mean + stddev * normal(); }

  private:
    std::uint64_t s_[4];
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace cswarm
