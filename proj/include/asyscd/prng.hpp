#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

// Counter-based pseudorandom generation: every draw is a pure function of
// (seed, counter), so streams can be replayed from any position and results
// do not depend on checkpoint stride or call interleaving.

namespace asyscd::rng {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Word `ctr` of the stream identified by `seed` (splitmix64 indexed form).
constexpr std::uint64_t at(std::uint64_t seed, std::uint64_t ctr) {
  return mix64(seed + (ctr + 1) * kGolden);
}

// Decorrelated sub-stream seed, e.g. for delay schedules vs index draws.
constexpr std::uint64_t derive(std::uint64_t seed, std::uint64_t salt) {
  return mix64(seed ^ mix64(salt + kGolden));
}

// Uniform draw from {0, 1, ..., n-1} via 128-bit multiply-shift.
inline std::uint64_t uniform_index(std::uint64_t seed, std::uint64_t ctr, std::uint64_t n) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(at(seed, ctr)) * n) >> 64);
}

// Uniform double in [0, 1).
inline double uniform01(std::uint64_t seed, std::uint64_t ctr) {
  return static_cast<double>(at(seed, ctr) >> 11) * 0x1.0p-53;
}

// Sequential N(0,1) stream, Box-Muller on consecutive counters.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : seed_(seed) {}

  double next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // u1 in (0,1] so log() is finite.
    const double u1 = static_cast<double>((at(seed_, ctr_++) >> 11) + 1) * 0x1.0p-53;
    const double u2 = static_cast<double>(at(seed_, ctr_++) >> 11) * 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  std::uint64_t seed_;
  std::uint64_t ctr_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// In-place Fisher-Yates shuffle driven by the (seed, round) stream.
template <class T>
void shuffle(std::vector<T>& items, std::uint64_t seed, std::uint64_t round) {
  const std::uint64_t key = derive(seed, round);
  std::uint64_t ctr = 0;
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::uint64_t j = uniform_index(key, ctr++, i);
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace asyscd::rng
