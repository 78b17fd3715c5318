#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace aptmine {

/// Fixed-size dense bit set. Used both for worlds (bit per AtomId) and for
/// occurrence sets (bit t-1 per time point t).
class BitSet {
public:
  using Word = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;

  BitSet() = default;
  explicit BitSet(std::size_t size) : size_(size), words_((size + kWordBits - 1) / kWordBits, 0) {}

  std::size_t size() const noexcept { return size_; }

  bool test(std::size_t i) const noexcept { return (words_[i / kWordBits] >> (i % kWordBits)) & 1U; }
  void set(std::size_t i) noexcept { words_[i / kWordBits] |= Word{1} << (i % kWordBits); }
  void reset(std::size_t i) noexcept { words_[i / kWordBits] &= ~(Word{1} << (i % kWordBits)); }

  std::size_t count() const noexcept {
    std::size_t n = 0;
    for (Word w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }

  bool any() const noexcept {
    for (Word w : words_)
      if (w != 0) return true;
    return false;
  }

  BitSet &operator&=(const BitSet &o) noexcept {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }
  BitSet &operator|=(const BitSet &o) noexcept {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  /// this := this & ~o
  BitSet &subtract(const BitSet &o) noexcept {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
    return *this;
  }

  /// Bit i of the result is bit i+k of this (moves every element k positions down).
  BitSet shifted_down(std::size_t k) const {
    BitSet out(size_);
    for (std::size_t i = k; i < size_; ++i)
      if (test(i)) out.set(i - k);
    return out;
  }
  /// Bit i+k of the result is bit i of this; bits pushed past size() are dropped.
  BitSet shifted_up(std::size_t k) const {
    BitSet out(size_);
    for (std::size_t i = 0; i + k < size_; ++i)
      if (test(i)) out.set(i + k);
    return out;
  }

  std::vector<std::size_t> members() const {
    std::vector<std::size_t> out;
    for (std::size_t w = 0; w < words_.size(); ++w) {
      Word bits = words_[w];
      while (bits != 0) {
        out.push_back(w * kWordBits + static_cast<std::size_t>(std::countr_zero(bits)));
        bits &= bits - 1;
      }
    }
    return out;
  }

  friend bool operator==(const BitSet &, const BitSet &) = default;

  friend BitSet operator&(BitSet a, const BitSet &b) { return a &= b; }
  friend BitSet operator|(BitSet a, const BitSet &b) { return a |= b; }

  /// |a & b| without materializing the intersection.
  friend std::size_t and_count(const BitSet &a, const BitSet &b) noexcept {
    std::size_t n = 0;
    for (std::size_t i = 0; i < a.words_.size(); ++i)
      n += static_cast<std::size_t>(std::popcount(a.words_[i] & b.words_[i]));
    return n;
  }
  friend std::size_t and_count(const BitSet &a, const BitSet &b, const BitSet &c) noexcept {
    std::size_t n = 0;
    for (std::size_t i = 0; i < a.words_.size(); ++i)
      n += static_cast<std::size_t>(std::popcount(a.words_[i] & b.words_[i] & c.words_[i]));
    return n;
  }
  /// |b & ~a|
  friend std::size_t andnot_count(const BitSet &a, const BitSet &b) noexcept {
    std::size_t n = 0;
    for (std::size_t i = 0; i < a.words_.size(); ++i)
      n += static_cast<std::size_t>(std::popcount(~a.words_[i] & b.words_[i]));
    return n;
  }
  /// |b & ~a & c|
  friend std::size_t andnot_count(const BitSet &a, const BitSet &b, const BitSet &c) noexcept {
    std::size_t n = 0;
    for (std::size_t i = 0; i < a.words_.size(); ++i)
      n += static_cast<std::size_t>(std::popcount(~a.words_[i] & b.words_[i] & c.words_[i]));
    return n;
  }

private:
  std::size_t size_ = 0;
  std::vector<Word> words_;
};

} // namespace aptmine
