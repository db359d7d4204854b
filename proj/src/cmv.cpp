#include "occwalk/cmv.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "occwalk/kernels.hpp"

namespace occwalk {

void DenseBlock::zero_rows(IndexRange rows, IndexRange cols) {
  const std::size_t len = cols.size();
  for (std::size_t r = rows.lo; r <= rows.hi; ++r) {
    std::fill_n(row(r) + cols.lo, len, cplx{});
  }
}

double DenseBlock::trace_real(IndexRange rows) const {
  std::vector<double> d(rows.size());
  for (std::size_t r = rows.lo; r <= rows.hi; ++r) {
    d[r - rows.lo] = at(r, r).real();
  }
  return kern::pairwise_sum(d.data(), d.size());
}

BandedUnitary::BandedUnitary(FlatWindow win) : win_(win), dim_(win.size()) {
  if (win.hi < win.lo) throw invalid_window("empty flat window");
  for (auto& d : diag_) d.assign(dim_, cplx{});
}

cplx BandedUnitary::entry(long row, long col) const {
  if (!win_.contains(row) || !win_.contains(col)) return {};
  const long o = col - row;
  if (o < -max_offset || o > max_offset) return {};
  return diag_[static_cast<std::size_t>(o + max_offset)][win_.index(row)];
}

void BandedUnitary::set_entry(long row, long col, cplx v) {
  if (!win_.contains(row) || !win_.contains(col)) {
    throw window_mismatch("entry outside window");
  }
  const long o = col - row;
  if (o < -max_offset || o > max_offset) {
    throw window_mismatch("entry outside the band");
  }
  const std::size_t oi = static_cast<std::size_t>(o + max_offset);
  diag_[oi][win_.index(row)] = v;
  if (v != cplx{}) used_[oi] = true;
}

void BandedUnitary::apply_range(const cplx* x, cplx* y, IndexRange in,
                                IndexRange out) const {
  std::fill_n(y + out.lo, out.size(), cplx{});
  const auto& k = kern::ops();
  for (long o = -max_offset; o <= max_offset; ++o) {
    const std::size_t oi = static_cast<std::size_t>(o + max_offset);
    if (!used_[oi]) continue;
    // rows r with r+o inside `in` and inside the window
    long lo = static_cast<long>(out.lo);
    long hi = static_cast<long>(out.hi);
    lo = std::max(lo, static_cast<long>(in.lo) - o);
    hi = std::min(hi, static_cast<long>(in.hi) - o);
    lo = std::max(lo, -o);
    hi = std::min(hi, static_cast<long>(dim_) - 1 - o);
    if (lo > hi) continue;
    const std::size_t r0 = static_cast<std::size_t>(lo);
    const std::size_t len = static_cast<std::size_t>(hi - lo + 1);
    k.mul_acc(diag_[oi].data() + r0, x + r0 + o, y + r0, len);
  }
}

void BandedUnitary::apply_adjoint_range(const cplx* x, cplx* y, IndexRange in,
                                        IndexRange out) const {
  std::fill_n(y + out.lo, out.size(), cplx{});
  const auto& k = kern::ops();
  // the entry U[r][r+o] connects input r to output r+o of the adjoint:
  // y[c] += conj(U[c-o][c]) x[c-o]
  for (long o = -max_offset; o <= max_offset; ++o) {
    const std::size_t oi = static_cast<std::size_t>(o + max_offset);
    if (!used_[oi]) continue;
    long lo = static_cast<long>(out.lo);
    long hi = static_cast<long>(out.hi);
    lo = std::max(lo, static_cast<long>(in.lo) + o);
    hi = std::min(hi, static_cast<long>(in.hi) + o);
    lo = std::max(lo, o);
    hi = std::min(hi, static_cast<long>(dim_) - 1 + o);
    if (lo > hi) continue;
    const std::size_t c0 = static_cast<std::size_t>(lo);
    const std::size_t len = static_cast<std::size_t>(hi - lo + 1);
    k.conj_mul_acc(diag_[oi].data() + (c0 - o), x + (c0 - o), y + c0, len);
  }
}

StateVector BandedUnitary::apply(const StateVector& v) const {
  if (v.window() != win_) throw window_mismatch("state window differs from operator window");
  StateVector out(win_);
  apply_range(v.data().data(), out.data().data(), full_range(), full_range());
  return out;
}

StateVector BandedUnitary::apply_adjoint(const StateVector& v) const {
  if (v.window() != win_) throw window_mismatch("state window differs from operator window");
  StateVector out(win_);
  apply_adjoint_range(v.data().data(), out.data().data(), full_range(),
                      full_range());
  return out;
}

void BandedUnitary::conjugate(const DenseBlock& in, IndexRange in_active,
                              DenseBlock& tmp, DenseBlock& out,
                              IndexRange out_active) const {
  const auto& k = kern::ops();
  // tmp = U in: row r of tmp is a combination of rows r+o of in.
  for (std::size_t r = out_active.lo; r <= out_active.hi; ++r) {
    cplx* trow = tmp.row(r) + in_active.lo;
    std::fill_n(trow, in_active.size(), cplx{});
    for (long o = -max_offset; o <= max_offset; ++o) {
      const std::size_t oi = static_cast<std::size_t>(o + max_offset);
      if (!used_[oi]) continue;
      const long rr = static_cast<long>(r) + o;
      if (rr < static_cast<long>(in_active.lo) ||
          rr > static_cast<long>(in_active.hi)) {
        continue;
      }
      const cplx a = diag_[oi][r];
      if (a == cplx{}) continue;
      k.axpy(a, in.row(static_cast<std::size_t>(rr)) + in_active.lo, trow,
             in_active.size());
    }
  }
  // out = tmp U†: out[r][c] = Σ_o conj(U[c][c+o]) tmp[r][c+o].
  for (std::size_t r = out_active.lo; r <= out_active.hi; ++r) {
    const cplx* trow = tmp.row(r);
    cplx* orow = out.row(r);
    std::fill_n(orow + out_active.lo, out_active.size(), cplx{});
    for (long o = -max_offset; o <= max_offset; ++o) {
      const std::size_t oi = static_cast<std::size_t>(o + max_offset);
      if (!used_[oi]) continue;
      long lo = static_cast<long>(out_active.lo);
      long hi = static_cast<long>(out_active.hi);
      lo = std::max(lo, static_cast<long>(in_active.lo) - o);
      hi = std::min(hi, static_cast<long>(in_active.hi) - o);
      if (lo > hi) continue;
      const std::size_t c0 = static_cast<std::size_t>(lo);
      const std::size_t len = static_cast<std::size_t>(hi - lo + 1);
      k.conj_mul_acc(diag_[oi].data() + c0, trow + c0 + o, orow + c0, len);
    }
  }
}

double BandedUnitary::unitarity_defect() const {
  cvec e(dim_), y(dim_), z(dim_);
  double worst = 0.0;
  for (std::size_t c = 0; c < dim_; ++c) {
    std::fill(e.begin(), e.end(), cplx{});
    e[c] = 1.0;
    apply_range(e.data(), y.data(), full_range(), full_range());
    apply_adjoint_range(y.data(), z.data(), full_range(), full_range());
    z[c] -= 1.0;
    for (const cplx& v : z) worst = std::max(worst, std::abs(v));
  }
  return worst;
}

BandedUnitary build_coined(const std::function<Coin(long)>& coins,
                           long half_width) {
  if (!coins) throw incomplete_model("coin map is null");
  const FlatWindow win = FlatWindow::sites(half_width);
  BandedUnitary u(win);
  const long L = half_width;
  for (long i = -L; i <= L; ++i) {
    const Coin c = coins(i);
    const long up = flat_of(i, Spin::up);
    const long dn = flat_of(i, Spin::down);
    // outgoing rows; at the edges the leaving target is redirected to the
    // boundary row that no interior transition reaches
    const long row_up = (i < L) ? flat_of(i + 1, Spin::up) : flat_of(L, Spin::down);
    const long row_dn = (i > -L) ? flat_of(i - 1, Spin::down) : flat_of(-L, Spin::up);
    u.set_entry(row_up, up, c.c11);
    u.set_entry(row_up, dn, c.c12);
    u.set_entry(row_dn, up, c.c21);
    u.set_entry(row_dn, dn, c.c22);
  }
  return u;
}

namespace {

cplx display_entry_impl(const std::function<cplx(long)>& alpha, long row,
                        long col) {
  if (col < row - 2 || col > row + 2) return {};
  auto rho = [&alpha](long j) {
    return std::sqrt(std::max(0.0, 1.0 - std::norm(alpha(j))));
  };
  if (row % 2 == 0) {
    // even row 2j
    const long j2 = row;
    if (col == j2 - 1) return std::conj(alpha(j2)) * rho(j2 - 1);
    if (col == j2) return -std::conj(alpha(j2)) * alpha(j2 - 1);
    if (col == j2 + 1) return rho(j2) * std::conj(alpha(j2 + 1));
    if (col == j2 + 2) return cplx(rho(j2) * rho(j2 + 1), 0.0);
    return {};
  }
  // odd row 2j+1
  const long j2 = row - 1;
  if (col == j2 - 1) return cplx(rho(j2) * rho(j2 - 1), 0.0);
  if (col == j2) return -rho(j2) * alpha(j2 - 1);
  if (col == j2 + 1) return -alpha(j2) * std::conj(alpha(j2 + 1));
  if (col == j2 + 2) return -alpha(j2) * rho(j2 + 1);
  return {};
}

BandedUnitary build_cmv_window(const std::function<cplx(long)>& alpha_eff,
                               FlatWindow win) {
  BandedUnitary u(win);
  for (long r = win.lo; r <= win.hi; ++r) {
    const long cr = cmv_flat_alignment(r);
    for (long c = std::max(win.lo, r - BandedUnitary::max_offset);
         c <= std::min(win.hi, r + BandedUnitary::max_offset); ++c) {
      const cplx v = display_entry_impl(alpha_eff, cr, cmv_flat_alignment(c));
      if (v != cplx{}) u.set_entry(r, c, v);
    }
  }
  return u;
}

}  // namespace

cplx cmv_display_entry(const VerblunskySequence& alphas, long row, long col) {
  return display_entry_impl([&alphas](long j) { return alphas.alpha(j); }, row,
                            col);
}

BandedUnitary build_cmv(const VerblunskySequence& alphas, long half_width) {
  if (half_width < 1) {
    throw invalid_window("window half-width must be >= 1, got " +
                         std::to_string(half_width));
  }
  const long L = half_width;
  const FlatWindow win{-2 * L - 1, 2 * L + 2};
  // cut coefficients: α = 1 decouples the block [lo, hi] in CMV labels
  auto alpha_eff = [&alphas, &win](long j) -> cplx {
    if (j == win.lo - 1 || j == win.hi) return cplx(1.0, 0.0);
    return alphas.alpha(j);
  };
  return build_cmv_window(alpha_eff, win);
}

BandedUnitary build_cmv_semi_infinite(const VerblunskySequence& alphas,
                                      std::size_t dim) {
  if (dim < 2) throw invalid_window("semi-infinite window too small");
  const FlatWindow win{0, static_cast<long>(dim) - 1};
  auto alpha_eff = [&alphas](long j) -> cplx {
    if (j == -1) return cplx(-1.0, 0.0);
    if (j < -1) return {};
    return alphas.alpha(j);
  };
  BandedUnitary u(win);
  for (long r = win.lo; r <= win.hi; ++r) {
    for (long c = std::max(win.lo, r - 2); c <= std::min(win.hi, r + 2); ++c) {
      const cplx v = display_entry_impl(alpha_eff, r, c);
      if (v != cplx{}) u.set_entry(r, c, v);
    }
  }
  return u;
}

BandedUnitary gauge_transform(const BandedUnitary& u,
                              const std::function<cplx(long)>& phase) {
  if (!phase) throw invalid_coefficient("null phase map");
  const FlatWindow& win = u.window();
  std::vector<cplx> d(win.size());
  for (long f = win.lo; f <= win.hi; ++f) {
    const cplx p = phase(f);
    if (std::abs(std::abs(p) - 1.0) > 1e-12) {
      throw invalid_coefficient("gauge phase is not unimodular at flat " +
                                std::to_string(f));
    }
    d[win.index(f)] = p;
  }
  BandedUnitary out(win);
  for (long r = win.lo; r <= win.hi; ++r) {
    for (long c = std::max(win.lo, r - BandedUnitary::max_offset);
         c <= std::min(win.hi, r + BandedUnitary::max_offset); ++c) {
      const cplx v = u.entry(r, c);
      if (v != cplx{}) {
        out.set_entry(r, c, d[win.index(r)] * v * std::conj(d[win.index(c)]));
      }
    }
  }
  return out;
}

BandedUnitary build_for_model(const ModelSpec& model, long half_width) {
  const CatalogEntry e = catalog(model);
  if (model.kind == ModelSpec::Kind::riesz) {
    return build_cmv(*e.alphas, half_width);
  }
  return build_coined(e.coins, half_width);
}

}  // namespace occwalk
