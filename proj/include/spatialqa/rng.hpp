// Copyright 2026 The spatialqa Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SPATIALQA_RNG_HPP_
#define SPATIALQA_RNG_HPP_

#include <cstdint>
#include <string_view>
#include <vector>

namespace spatialqa {

namespace detail {

inline uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline uint64_t rotl64(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace detail

// Deterministic generator with identical output on every platform. The
// standard <random> distributions are implementation-defined, which breaks
// byte-reproducible dataset builds, so bounded sampling and shuffling are
// implemented here directly (xoshiro256** core, splitmix64 seeding).
class Rng {
 public:
  explicit Rng(uint64_t seed) : seed_(seed) {
    uint64_t sm = seed;
    for (auto& word : state_) word = detail::splitmix64(sm);
  }

  uint64_t seed() const { return seed_; }

  uint64_t next_u64() {
    const uint64_t result = detail::rotl64(state_[1] * 5, 7) * 9;
    const uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = detail::rotl64(state_[3], 45);
    return result;
  }

  // Uniform value in [0, bound). bound must be nonzero. Unbiased via
  // threshold rejection.
  uint64_t below(uint64_t bound) {
    const uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  size_t index(size_t size) { return static_cast<size_t>(below(size)); }

  bool coin() { return (next_u64() >> 63) != 0; }

  // Uniform in [0, 1), 53-bit resolution.
  double real01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [lo, hi].
  int int_in(int lo, int hi) {
    return lo + static_cast<int>(below(static_cast<uint64_t>(hi - lo) + 1));
  }

  template <typename T>
  const T& pick(const std::vector<T>& items) {
    return items[index(items.size())];
  }

  // Fisher-Yates, descending.
  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[index(i)]);
    }
  }

 private:
  uint64_t seed_;
  uint64_t state_[4];
};

inline uint64_t hash_tag(std::string_view tag) {
  uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : tag) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Derives an independent stream seed from a master seed and a structured
// position (split tag, task parameter, sample index, retry attempt). Every
// sample owns its own stream, so generation order and worker scheduling
// cannot affect the output.
inline uint64_t derive_stream(uint64_t master_seed, std::string_view tag, uint64_t a,
                              uint64_t b, uint64_t c = 0) {
  uint64_t x = master_seed;
  detail::splitmix64(x);
  x ^= hash_tag(tag);
  detail::splitmix64(x);
  x ^= a * 0x9e3779b97f4a7c15ULL;
  detail::splitmix64(x);
  x ^= b * 0xd1b54a32d192ed03ULL;
  detail::splitmix64(x);
  x ^= c * 0x8cb92ba72f3d8dd7ULL;
  return detail::splitmix64(x);
}

}  // namespace spatialqa

#endif  // SPATIALQA_RNG_HPP_
