#pragma once

#include <array>
#include <functional>

#include "occwalk/coin.hpp"

namespace occwalk {

// Inclusive range of window indices.  Engines track the light cone with these
// so inner loops only touch the reachable part of the window.
struct IndexRange {
  std::size_t lo = 0;
  std::size_t hi = 0;
  std::size_t size() const { return hi - lo + 1; }
  bool operator==(const IndexRange&) const = default;
};

// Row-major square complex matrix used for density blocks.
class DenseBlock {
 public:
  DenseBlock() = default;
  explicit DenseBlock(std::size_t dim) : dim_(dim), a_(dim * dim) {}

  std::size_t dim() const { return dim_; }
  cplx* row(std::size_t r) { return a_.data() + r * dim_; }
  const cplx* row(std::size_t r) const { return a_.data() + r * dim_; }
  cplx& at(std::size_t r, std::size_t c) { return a_[r * dim_ + c]; }
  const cplx& at(std::size_t r, std::size_t c) const {
    return a_[r * dim_ + c];
  }

  void zero_rows(IndexRange rows, IndexRange cols);
  // Real part of the trace over the given diagonal range, fixed-order sum.
  double trace_real(IndexRange rows) const;

 private:
  std::size_t dim_ = 0;
  cvec a_;
};

// One-step evolution operator on a finite flat window.  Banded with
// |row - col| <= 4; stored by diagonals so application is a handful of
// elementwise complex passes over contiguous rows.
class BandedUnitary {
 public:
  static constexpr long max_offset = 4;

  explicit BandedUnitary(FlatWindow win);

  const FlatWindow& window() const { return win_; }
  std::size_t dim() const { return dim_; }
  IndexRange full_range() const { return {0, dim_ - 1}; }

  cplx entry(long row, long col) const;
  void set_entry(long row, long col, cplx v);

  // y = U x on the given ranges.  Contract: x vanishes outside `in`, the true
  // support of U x is contained in `out`; y is zeroed on `out` and left
  // untouched elsewhere.
  void apply_range(const cplx* x, cplx* y, IndexRange in, IndexRange out) const;
  // y = U† x, same contract.
  void apply_adjoint_range(const cplx* x, cplx* y, IndexRange in,
                           IndexRange out) const;

  StateVector apply(const StateVector& v) const;
  StateVector apply_adjoint(const StateVector& v) const;

  // out = U in U† for a block supported on rows/cols `in`; the result is
  // written on rows/cols `out`.  `tmp` is scratch of the same dimension.
  void conjugate(const DenseBlock& in, IndexRange in_active, DenseBlock& tmp,
                 DenseBlock& out, IndexRange out_active) const;

  // max_c || U† U e_c - e_c ||_inf over the window.
  double unitarity_defect() const;

 private:
  FlatWindow win_;
  std::size_t dim_;
  std::array<cvec, 9> diag_;  // diag_[o+4][r] = U[lo+r][lo+r+o]
  std::array<bool, 9> used_{};
};

// Coined construction from the transition rules: U|i,↑> = c11|i+1,↑> +
// c21|i-1,↓>, U|i,↓> = c12|i+1,↑> + c22|i-1,↓>.  At the window edge the
// outgoing target is redirected to the otherwise unreached boundary row,
// which keeps the operator exactly unitary; the light cone never gets there
// when the window half-width is >= steps + 2.
BandedUnitary build_coined(const std::function<Coin(long)>& coins,
                           long half_width);

// CMV construction on the slightly wider window [-2L-1, 2L+2] (the image of
// a contiguous CMV-index block under the basis alignment below).  The two
// coefficients at the cuts are replaced by α = 1, which decouples the window
// and keeps it exactly unitary.
BandedUnitary build_cmv(const VerblunskySequence& alphas, long half_width);

// Semi-infinite CMV operator (α_{-1} = -1) truncated to indices [0, dim); no
// closure at the right edge, so only good for powers that stay inside.
BandedUnitary build_cmv_semi_infinite(const VerblunskySequence& alphas,
                                      std::size_t dim);

// D U D† for a diagonal unimodular D given by flat index -> phase.
BandedUnitary gauge_transform(const BandedUnitary& u,
                              const std::function<cplx(long)>& phase);

// Entry of the doubly infinite CMV matrix in its own index labels.
cplx cmv_display_entry(const VerblunskySequence& alphas, long row, long col);

// Alignment between CMV indices and (site, spin) flat labels: |i,↑> sits at
// CMV index 2i-1 and |i,↓> at 2i+2, which is the unique assignment making a
// CMV matrix with vanishing odd coefficients equal, entry by entry, to the
// coined walk of the corresponding coins.  The map is an involution and
// fixes the positive subspace {index >= 1}.
constexpr long cmv_flat_alignment(long idx) {
  return idx % 2 == 0 ? idx - 1 : idx + 1;
}

// Catalog dispatch: coined models go through build_coined, the Riesz walk
// through build_cmv.
BandedUnitary build_for_model(const ModelSpec& model, long half_width);

}  // namespace occwalk
