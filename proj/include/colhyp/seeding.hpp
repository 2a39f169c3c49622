#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace colhyp {

/// What a derived seed is used for. Distinct purposes give independent streams.
enum class SeedPurpose : std::uint64_t {
  path = 1,        // coefficient / forcing path of sample omega
  data = 2,        // random initial data
  noise = 3,       // white-noise increments
  audit = 4,       // solver self-checks
  auxiliary = 5,
};

/// SplitMix64 finalizer; bijective on 64-bit words.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Subseed for sample `sample` and ladder level `level` under `master`.
///
/// The value depends only on (master, purpose, level, sample), so adding samples or
/// levels never changes the seeds already handed out. Paths that must be shared across
/// an epsilon ladder use `level = 0`.
std::uint64_t derive_seed(std::uint64_t master, SeedPurpose purpose, std::uint64_t level,
                          std::uint64_t sample) noexcept;

/// Stable 64-bit hash of a tag string (FNV-1a), for mixing scenario names into seeds.
std::uint64_t hash_tag(std::string_view tag) noexcept;

using Rng = std::mt19937_64;

}  // namespace colhyp
