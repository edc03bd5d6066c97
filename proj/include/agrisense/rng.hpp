#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace agrisense {

// Seedable, platform-stable generator used everywhere randomness is needed.
// Core algorithm is xoshiro256++ (Blackman & Vigna), seeded through
// splitmix64. std:: distributions are implementation-defined and therefore
// never used; uniform doubles, normals and bounded integers are produced
// with the explicit constructions below so that datasets and models are
// reproducible byte-for-byte from a seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& word : state_) word = splitmix64(x);
  }

  static std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform in [0, 1), 53-bit resolution.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in (0, 1]; safe as a log() argument.
  double next_double_open() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // Standard normal via the Marsaglia polar method (sqrt/log only, no
  // trigonometry; results depend solely on the stream).
  double next_normal();

  // Unbiased integer in [0, n) by Lemire's multiply-shift with rejection.
  std::uint64_t bounded(std::uint64_t n);

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(bounded(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  // Derives an independent child seed; `key` tells streams apart (plant
  // index, tree index, permutation index, ...).
  std::uint64_t child_seed(std::uint64_t key) {
    std::uint64_t x = state_[0] ^ (0x632be59bd9b4e019ULL * (key + 1));
    return splitmix64(x);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Stable 64-bit FNV-1a, used to fold string identifiers (plant ids, tags)
// into seed material and to fingerprint files/predictions.
std::uint64_t fnv1a64(std::string_view bytes);

// Combines a root seed with a named stream tag.
std::uint64_t mix_seed(std::uint64_t seed, std::string_view tag);
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t key);

}  // namespace agrisense
