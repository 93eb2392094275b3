#pragma once

#include <bit>
#include <cassert>
#include <cstdint>
#include <vector>

namespace costar {

/// Fixed-width bitset sized at construction. One heap word covers graphs of
/// up to 64 vertices; wider sets spill into further words transparently.
class Bits {
public:
  Bits() = default;
  explicit Bits(int n) : n_(n), w_((n + 63) / 64, 0) {}

  int width() const { return n_; }

  bool test(int i) const {
    assert(i >= 0 && i < n_);
    return (w_[i >> 6] >> (i & 63)) & 1u;
  }
  void set(int i) {
    assert(i >= 0 && i < n_);
    w_[i >> 6] |= std::uint64_t{1} << (i & 63);
  }
  void reset(int i) {
    assert(i >= 0 && i < n_);
    w_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
  }

  int count() const {
    int c = 0;
    for (auto w : w_) c += std::popcount(w);
    return c;
  }
  bool any() const {
    for (auto w : w_)
      if (w) return true;
    return false;
  }
  bool none() const { return !any(); }

  Bits& operator|=(const Bits& o) {
    assert(n_ == o.n_);
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
    return *this;
  }
  Bits& operator&=(const Bits& o) {
    assert(n_ == o.n_);
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
    return *this;
  }
  Bits& operator^=(const Bits& o) {
    assert(n_ == o.n_);
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] ^= o.w_[i];
    return *this;
  }
  /// Removes every bit set in `o` (set difference).
  Bits& remove(const Bits& o) {
    assert(n_ == o.n_);
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= ~o.w_[i];
    return *this;
  }

  friend Bits operator|(Bits a, const Bits& b) { return a |= b; }
  friend Bits operator&(Bits a, const Bits& b) { return a &= b; }
  friend Bits operator^(Bits a, const Bits& b) { return a ^= b; }
  friend Bits and_not(Bits a, const Bits& b) { return a.remove(b); }

  /// Complement within the fixed width.
  Bits flipped() const {
    Bits r(*this);
    for (auto& w : r.w_) w = ~w;
    r.trim();
    return r;
  }

  bool operator==(const Bits& o) const { return n_ == o.n_ && w_ == o.w_; }

  bool intersects(const Bits& o) const {
    assert(n_ == o.n_);
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & o.w_[i]) return true;
    return false;
  }
  bool is_subset_of(const Bits& o) const {
    assert(n_ == o.n_);
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & ~o.w_[i]) return false;
    return true;
  }

  /// Index of the lowest set bit, or -1 when empty.
  int find_first() const {
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (w_[i]) return static_cast<int>(i * 64) + std::countr_zero(w_[i]);
    return -1;
  }
  /// Index of the lowest set bit above `i`, or -1 when none remains.
  int find_next(int i) const {
    ++i;
    if (i >= n_) return -1;
    std::size_t word = static_cast<std::size_t>(i) >> 6;
    std::uint64_t w = w_[word] & (~std::uint64_t{0} << (i & 63));
    while (true) {
      if (w) return static_cast<int>(word * 64) + std::countr_zero(w);
      if (++word == w_.size()) return -1;
      w = w_[word];
    }
  }

  /// Ascending list of the set positions.
  std::vector<int> to_vector() const {
    std::vector<int> v;
    v.reserve(count());
    for (int i = find_first(); i >= 0; i = find_next(i)) v.push_back(i);
    return v;
  }

  static Bits from_vector(int n, const std::vector<int>& ids) {
    Bits r(n);
    for (int i : ids) r.set(i);
    return r;
  }

private:
  void trim() {
    if (n_ & 63) w_.back() &= ~std::uint64_t{0} >> (64 - (n_ & 63));
  }

  int n_ = 0;
  std::vector<std::uint64_t> w_;
};

}  // namespace costar
