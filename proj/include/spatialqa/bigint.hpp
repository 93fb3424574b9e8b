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

#ifndef SPATIALQA_BIGINT_HPP_
#define SPATIALQA_BIGINT_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace spatialqa {

// Unsigned arbitrary-precision integer, just large enough for exact
// combinatorial counting: multiply by machine words, exact division by small
// divisors, comparison, and decimal rendering. Limbs are base 1e9.
class BigUint {
 public:
  BigUint() : limbs_{0} {}

  explicit BigUint(uint64_t value) {
    do {
      limbs_.push_back(static_cast<uint32_t>(value % kBase));
      value /= kBase;
    } while (value != 0);
  }

  BigUint& operator*=(uint64_t factor) {
    if (factor == 0) {
      limbs_.assign(1, 0);
      return *this;
    }
    // Split the factor so per-limb products stay inside unsigned 64 bits.
    if (factor >= kBase) {
      const uint64_t hi = factor / kBase;
      const uint64_t lo = factor % kBase;
      BigUint high_part = *this;
      high_part.mul_small(hi);
      high_part.shift_limbs(1);
      mul_small(lo);
      add(high_part);
      return *this;
    }
    mul_small(factor);
    return *this;
  }

  // Divides by a small divisor; the division must be exact.
  BigUint& divide_exact(uint32_t divisor) {
    if (divisor == 0) throw std::invalid_argument("BigUint: division by zero");
    uint64_t remainder = 0;
    for (size_t i = limbs_.size(); i-- > 0;) {
      const uint64_t cur = remainder * kBase + limbs_[i];
      limbs_[i] = static_cast<uint32_t>(cur / divisor);
      remainder = cur % divisor;
    }
    if (remainder != 0) {
      throw std::logic_error("BigUint: inexact division (remainder " +
                             std::to_string(remainder) + ")");
    }
    trim();
    return *this;
  }

  bool operator==(const BigUint& other) const { return limbs_ == other.limbs_; }
  bool operator!=(const BigUint& other) const { return !(*this == other); }

  bool operator<(const BigUint& other) const {
    if (limbs_.size() != other.limbs_.size()) return limbs_.size() < other.limbs_.size();
    for (size_t i = limbs_.size(); i-- > 0;) {
      if (limbs_[i] != other.limbs_[i]) return limbs_[i] < other.limbs_[i];
    }
    return false;
  }
  bool operator>(const BigUint& other) const { return other < *this; }

  bool is_zero() const { return limbs_.size() == 1 && limbs_[0] == 0; }

  // Value as uint64_t; throws if it does not fit.
  uint64_t to_u64() const {
    uint64_t value = 0;
    for (size_t i = limbs_.size(); i-- > 0;) {
      if (value > (UINT64_MAX - limbs_[i]) / kBase) {
        throw std::overflow_error("BigUint: does not fit in 64 bits");
      }
      value = value * kBase + limbs_[i];
    }
    return value;
  }

  std::string to_string() const {
    std::string out = std::to_string(limbs_.back());
    char buf[10];
    for (size_t i = limbs_.size() - 1; i-- > 0;) {
      std::snprintf(buf, sizeof(buf), "%09u", limbs_[i]);
      out += buf;
    }
    return out;
  }

 private:
  static constexpr uint64_t kBase = 1000000000ULL;

  void mul_small(uint64_t factor) {  // factor < kBase
    uint64_t carry = 0;
    for (auto& limb : limbs_) {
      const uint64_t cur = static_cast<uint64_t>(limb) * factor + carry;
      limb = static_cast<uint32_t>(cur % kBase);
      carry = cur / kBase;
    }
    while (carry != 0) {
      limbs_.push_back(static_cast<uint32_t>(carry % kBase));
      carry /= kBase;
    }
    trim();
  }

  void add(const BigUint& other) {
    if (other.limbs_.size() > limbs_.size()) limbs_.resize(other.limbs_.size(), 0);
    uint64_t carry = 0;
    for (size_t i = 0; i < limbs_.size(); ++i) {
      uint64_t cur = carry + limbs_[i];
      if (i < other.limbs_.size()) cur += other.limbs_[i];
      limbs_[i] = static_cast<uint32_t>(cur % kBase);
      carry = cur / kBase;
    }
    if (carry != 0) limbs_.push_back(static_cast<uint32_t>(carry));
  }

  void shift_limbs(size_t count) {  // multiply by kBase^count
    if (is_zero()) return;
    limbs_.insert(limbs_.begin(), count, 0);
  }

  void trim() {
    while (limbs_.size() > 1 && limbs_.back() == 0) limbs_.pop_back();
  }

  std::vector<uint32_t> limbs_;  // little-endian
};

}  // namespace spatialqa

#endif  // SPATIALQA_BIGINT_HPP_
