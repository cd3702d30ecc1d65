#include "lsanb/rng.hpp"

namespace lsanb {

// splitmix64 finalizer
std::uint64_t SeedTree::mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

SeedTree SeedTree::child(std::string_view name) const {
  // FNV-1a over the name, folded with the parent seed.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : name) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return SeedTree(mix(seed_ ^ mix(h)));
}

}  // namespace lsanb
