#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace cplogic {

// Fixed-width bitset sized at construction.  Used for true-atom sets,
// fired-rule sets and as distribution keys, so equality and hashing are exact.
class Bitset {
 public:
  Bitset() = default;
  explicit Bitset(std::size_t nbits) : nbits_(nbits), words_((nbits + 63) / 64, 0) {}

  std::size_t size() const { return nbits_; }

  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }

  void set(std::size_t i, bool v = true) {
    uint64_t mask = uint64_t{1} << (i & 63);
    if (v)
      words_[i >> 6] |= mask;
    else
      words_[i >> 6] &= ~mask;
  }

  bool any() const {
    for (uint64_t w : words_)
      if (w) return true;
    return false;
  }

  std::size_t count() const {
    std::size_t n = 0;
    for (uint64_t w : words_) n += static_cast<std::size_t>(__builtin_popcountll(w));
    return n;
  }

  bool operator==(const Bitset& o) const { return nbits_ == o.nbits_ && words_ == o.words_; }
  bool operator!=(const Bitset& o) const { return !(*this == o); }

  // Strict total order so bitsets can key ordered maps.
  bool operator<(const Bitset& o) const {
    if (nbits_ != o.nbits_) return nbits_ < o.nbits_;
    return words_ < o.words_;
  }

  Bitset& operator|=(const Bitset& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }

  Bitset& operator&=(const Bitset& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }

  // First set bit at position >= from, or size() when none.
  std::size_t next_set(std::size_t from) const {
    for (std::size_t i = from; i < nbits_;) {
      uint64_t w = words_[i >> 6] >> (i & 63);
      if (w) return i + static_cast<std::size_t>(__builtin_ctzll(w));
      i = (i & ~std::size_t{63}) + 64;
    }
    return nbits_;
  }

  std::size_t hash() const {
    std::size_t h = nbits_;
    for (uint64_t w : words_) h = h * 0x9e3779b97f4a7c15ULL + static_cast<std::size_t>(w ^ (w >> 31));
    return h;
  }

 private:
  std::size_t nbits_ = 0;
  std::vector<uint64_t> words_;
};

struct BitsetHash {
  std::size_t operator()(const Bitset& b) const { return b.hash(); }
};

}  // namespace cplogic
