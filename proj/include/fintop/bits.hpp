#pragma once

#include <cstdint>
#include <vector>

namespace fintop {

// Fixed-width dynamic bitset used for point sets and relation rows.
// All binary operations require operands of equal width.
class Bits {
 public:
  Bits() = default;
  explicit Bits(int nbits) : n_(nbits), w_((nbits + 63) / 64, 0) {}

  static Bits full(int nbits) {
    Bits b(nbits);
    for (int i = 0; i < nbits; ++i) b.set(i);
    return b;
  }

  int width() const { return n_; }

  bool test(int i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }
  void set(int i) { w_[i >> 6] |= uint64_t{1} << (i & 63); }
  void reset(int i) { w_[i >> 6] &= ~(uint64_t{1} << (i & 63)); }

  int count() const {
    int c = 0;
    for (uint64_t w : w_) c += __builtin_popcountll(w);
    return c;
  }
  bool any() const {
    for (uint64_t w : w_)
      if (w) return true;
    return false;
  }
  bool none() const { return !any(); }

  bool operator==(const Bits& o) const = default;

  Bits& operator|=(const Bits& o) {
    for (size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
    return *this;
  }
  Bits& operator&=(const Bits& o) {
    for (size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
    return *this;
  }
  Bits& subtract(const Bits& o) {  // set difference
    for (size_t i = 0; i < w_.size(); ++i) w_[i] &= ~o.w_[i];
    return *this;
  }
  friend Bits operator|(Bits a, const Bits& b) { return a |= b; }
  friend Bits operator&(Bits a, const Bits& b) { return a &= b; }

  Bits complement() const {
    Bits r(n_);
    for (size_t i = 0; i < w_.size(); ++i) r.w_[i] = ~w_[i];
    r.trim();
    return r;
  }

  bool subset_of(const Bits& o) const {
    for (size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & ~o.w_[i]) return false;
    return true;
  }
  bool intersects(const Bits& o) const {
    for (size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & o.w_[i]) return true;
    return false;
  }

  // Index of lowest set bit, -1 when empty.
  int first() const {
    for (size_t i = 0; i < w_.size(); ++i)
      if (w_[i]) return int(i) * 64 + __builtin_ctzll(w_[i]);
    return -1;
  }

  template <class F>
  void for_each(F f) const {
    for (size_t i = 0; i < w_.size(); ++i) {
      uint64_t w = w_[i];
      while (w) {
        f(int(i) * 64 + __builtin_ctzll(w));
        w &= w - 1;
      }
    }
  }

  std::vector<int> to_indices() const {
    std::vector<int> v;
    v.reserve(count());
    for_each([&](int i) { v.push_back(i); });
    return v;
  }

  uint64_t hash() const {
    uint64_t h = 1469598103934665603ull;
    for (uint64_t w : w_) {
      h ^= w;
      h *= 1099511628211ull;
    }
    return h;
  }

 private:
  void trim() {
    if (n_ & 63) w_.back() &= (uint64_t{1} << (n_ & 63)) - 1;
  }

  int n_ = 0;
  std::vector<uint64_t> w_;
};

}  // namespace fintop
