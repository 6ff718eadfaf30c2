#include "hiermtl/random.hpp"

namespace hiermtl {

namespace {

// FNV-1a; std::hash is not stable across standard libraries.
std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::string_view name, std::uint64_t index) {
  return splitmix64(splitmix64(seed ^ fnv1a(name)) + index);
}

std::mt19937_64 make_stream(std::uint64_t seed, std::string_view name, std::uint64_t index) {
  const std::uint64_t s = derive_seed(seed, name, index);
  std::seed_seq seq{static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace hiermtl
