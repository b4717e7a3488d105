#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace mcs {

using Rng = std::mt19937_64;

/// Independent generator for (seed, stream...), e.g. (seed, cell, trial), so a
/// trial's draws never depend on how trials are spread over threads.
Rng make_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> stream = {});

/// Uniform integer in [lo, hi], identical on every standard library.
std::int64_t uniform_int(Rng& rng, std::int64_t lo, std::int64_t hi);

/// Uniform double in [0, 1) built from the top 53 bits of one draw.
double uniform_unit(Rng& rng);

bool bernoulli(Rng& rng, double p);

}  // namespace mcs
