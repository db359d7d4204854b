#pragma once

#include "occwalk/common.hpp"

// Spin-site basis for walks on the integers.  A state |i>⊗|s> is addressed by
// the flat index 2i (spin up) or 2i+1 (spin down), which orders the basis as
// ..., |-1↑>, |-1↓>, |0↑>, |0↓>, |1↑>, |1↓>, ...  The positive half of the
// space is spanned by |0↓>, |1↑>, |1↓>, ..., i.e. exactly the flat indices
// >= 1, so the monitoring projection is a diagonal indicator.

namespace occwalk {

enum class Spin : int { up = 0, down = 1 };

constexpr long flat_of(long site, Spin s) {
  return 2 * site + (s == Spin::down ? 1 : 0);
}

constexpr long site_of(long flat) {
  return flat >= 0 ? flat / 2 : (flat - 1) / 2;
}

constexpr Spin spin_of(long flat) {
  return (flat - 2 * site_of(flat)) == 0 ? Spin::up : Spin::down;
}

constexpr bool positive_flat(long flat) { return flat >= 1; }

// Contiguous flat-index range [lo, hi].
struct FlatWindow {
  long lo = 0;
  long hi = 1;

  // Symmetric window of sites -L..L.
  static FlatWindow sites(long half_width);

  std::size_t size() const { return static_cast<std::size_t>(hi - lo + 1); }
  bool contains(long flat) const { return flat >= lo && flat <= hi; }
  std::size_t index(long flat) const {
    return static_cast<std::size_t>(flat - lo);
  }
  long flat_at(std::size_t idx) const { return lo + static_cast<long>(idx); }
  // Index of the first flat in the positive subspace.
  std::size_t positive_begin() const { return index(1); }

  bool operator==(const FlatWindow&) const = default;
};

class StateVector {
 public:
  explicit StateVector(FlatWindow win);

  const FlatWindow& window() const { return win_; }
  std::size_t dim() const { return amp_.size(); }

  cplx at(long flat) const {
    return win_.contains(flat) ? amp_[win_.index(flat)] : cplx{};
  }
  void set(long flat, cplx v);

  const cvec& data() const { return amp_; }
  cvec& data() { return amp_; }

  double norm2() const;

  // Copy onto another window; amplitudes outside the overlap are dropped.
  StateVector on_window(const FlatWindow& w) const;

 private:
  FlatWindow win_;
  cvec amp_;
};

// (|0↑> + i|0↓>)/sqrt(2) on the symmetric window of half-width `half_width`.
StateVector initial_state(long half_width);

StateVector project_positive(const StateVector& v);
StateVector project_negative(const StateVector& v);

}  // namespace occwalk
