#include "occwalk/basis.hpp"

#include <cmath>

#include "occwalk/kernels.hpp"

namespace occwalk {

FlatWindow FlatWindow::sites(long half_width) {
  if (half_width < 1) {
    throw invalid_window("window half-width must be >= 1, got " +
                         std::to_string(half_width));
  }
  return FlatWindow{-2 * half_width, 2 * half_width + 1};
}

StateVector::StateVector(FlatWindow win) : win_(win), amp_(win.size()) {
  if (win.hi < win.lo) throw invalid_window("empty flat window");
}

void StateVector::set(long flat, cplx v) {
  if (!win_.contains(flat)) {
    throw window_mismatch("flat index " + std::to_string(flat) +
                          " outside window");
  }
  amp_[win_.index(flat)] = v;
}

double StateVector::norm2() const {
  std::vector<double> sq(amp_.size());
  for (std::size_t i = 0; i < amp_.size(); ++i) sq[i] = std::norm(amp_[i]);
  return kern::pairwise_sum(sq.data(), sq.size());
}

StateVector StateVector::on_window(const FlatWindow& w) const {
  StateVector out(w);
  const long lo = std::max(win_.lo, w.lo);
  const long hi = std::min(win_.hi, w.hi);
  for (long f = lo; f <= hi; ++f) out.amp_[w.index(f)] = amp_[win_.index(f)];
  return out;
}

StateVector initial_state(long half_width) {
  StateVector v(FlatWindow::sites(half_width));
  const double r = 1.0 / std::sqrt(2.0);
  v.set(flat_of(0, Spin::up), cplx(r, 0.0));
  v.set(flat_of(0, Spin::down), cplx(0.0, r));
  return v;
}

namespace {

StateVector project(const StateVector& v, bool keep_positive) {
  StateVector out(v.window());
  const FlatWindow& w = v.window();
  for (std::size_t i = 0; i < v.dim(); ++i) {
    if (positive_flat(w.flat_at(i)) == keep_positive) {
      out.data()[i] = v.data()[i];
    }
  }
  return out;
}

}  // namespace

StateVector project_positive(const StateVector& v) { return project(v, true); }

StateVector project_negative(const StateVector& v) { return project(v, false); }

}  // namespace occwalk
