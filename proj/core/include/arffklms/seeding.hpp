#pragma once

#include <cstdint>
#include <string_view>

namespace arffklms {

/// Stream labels used when deriving per-run sub-seeds.
namespace streams {
inline constexpr std::string_view stream = "stream";
inline constexpr std::string_view input = "input";
inline constexpr std::string_view noise = "noise";
inline constexpr std::string_view features = "features";
}  // namespace streams

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Derives the seed for one (run, purpose) pair from the experiment root seed.
///
/// The rule is `splitmix64(splitmix64(root ^ splitmix64(run + 1)) ^ fnv1a(label))`.
/// Distinct labels give statistically independent generators for the same run,
/// and the result depends only on its arguments, never on scheduling.
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t run, std::string_view label) noexcept;

}  // namespace arffklms
