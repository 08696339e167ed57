// Copyright 2026 The Bloomier Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BLOOMIER_PACKED_VECTOR_H_
#define BLOOMIER_PACKED_VECTOR_H_

#include <bit>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace bloomier {

// Number of bits needed to hold every residue modulo `modulus`, i.e.
// ceil(log2(modulus)). Returns 0 for modulus <= 1.
inline unsigned bits_for_modulus(uint64_t modulus) {
  if (modulus <= 1) return 0;
  return static_cast<unsigned>(std::bit_width(modulus - 1));
}

// Fixed-width unsigned integers packed back to back in 64-bit words.
class PackedVector {
 public:
  PackedVector() = default;
  PackedVector(size_t size, unsigned width)
      : size_(size), width_(width), words_((size * width + 63) / 64, 0) {
    assert(width <= 64);
  }

  size_t size() const { return size_; }
  unsigned width() const { return width_; }
  size_t bit_size() const { return size_ * width_; }

  uint64_t get(size_t i) const {
    assert(i < size_);
    if (width_ == 0) return 0;
    const size_t bit = i * width_;
    const size_t w = bit / 64;
    const unsigned off = bit % 64;
    uint64_t v = words_[w] >> off;
    if (off + width_ > 64 && w + 1 < words_.size()) v |= words_[w + 1] << (64 - off);
    return v & mask();
  }

  void set(size_t i, uint64_t value) {
    assert(i < size_);
    if (width_ == 0) return;
    value &= mask();
    const size_t bit = i * width_;
    const size_t w = bit / 64;
    const unsigned off = bit % 64;
    words_[w] = (words_[w] & ~(mask() << off)) | (value << off);
    if (off + width_ > 64 && w + 1 < words_.size()) {
      const unsigned spill = off + width_ - 64;
      const uint64_t hi_mask = (uint64_t{1} << spill) - 1;
      words_[w + 1] = (words_[w + 1] & ~hi_mask) | (value >> (64 - off));
    }
  }

  friend bool operator==(const PackedVector&, const PackedVector&) = default;

 private:
  uint64_t mask() const {
    return width_ == 64 ? ~uint64_t{0} : (uint64_t{1} << width_) - 1;
  }

  size_t size_ = 0;
  unsigned width_ = 0;
  std::vector<uint64_t> words_;
};

}  // namespace bloomier

#endif  // BLOOMIER_PACKED_VECTOR_H_
