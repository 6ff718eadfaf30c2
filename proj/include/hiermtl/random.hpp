#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace hiermtl {

// Named substream of a single user-facing seed. Streams with different
// (name, index) pairs are statistically independent.
std::mt19937_64 make_stream(std::uint64_t seed, std::string_view name, std::uint64_t index = 0);

std::uint64_t derive_seed(std::uint64_t seed, std::string_view name, std::uint64_t index = 0);

}  // namespace hiermtl
