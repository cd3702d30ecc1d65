#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace lsanb {

// Splittable seed source. Every stochastic component asks for a child
// stream by name, so adding a new consumer never perturbs existing ones.
class SeedTree {
 public:
  explicit SeedTree(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }
  SeedTree child(std::string_view name) const;
  std::mt19937_64 engine() const { return std::mt19937_64(mix(seed_)); }

  static std::uint64_t mix(std::uint64_t x);

 private:
  std::uint64_t seed_;
};

}  // namespace lsanb
