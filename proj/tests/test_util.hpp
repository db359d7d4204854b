#pragma once

#include <gmpxx.h>

#include <complex>
#include <random>
#include <vector>

#include "occwalk/basis.hpp"
#include "occwalk/cmv.hpp"

// Shared helpers for the test suites: random data, a dense LM-product oracle
// for the CMV entries, an exact dense Toeplitz solve as an independent route
// to the Verblunsky coefficients, and a Cholesky-based PSD check.

namespace testutil {

using occwalk::cplx;

inline std::mt19937_64 rng(std::uint64_t seed = 0x5eedull) {
  return std::mt19937_64(seed);
}

inline cplx random_unit_complex(std::mt19937_64& g) {
  std::uniform_real_distribution<double> phase(0.0, 6.283185307179586);
  return std::polar(1.0, phase(g));
}

inline occwalk::StateVector random_state(const occwalk::FlatWindow& win,
                                         std::mt19937_64& g,
                                         long support_sites = -1) {
  std::normal_distribution<double> gauss;
  occwalk::StateVector v(win);
  for (long f = win.lo; f <= win.hi; ++f) {
    if (support_sites >= 0 && std::abs(occwalk::site_of(f)) > support_sites) {
      continue;
    }
    v.set(f, cplx(gauss(g), gauss(g)));
  }
  const double norm = std::sqrt(v.norm2());
  for (auto& a : v.data()) a /= norm;
  return v;
}

// Dense doubly infinite CMV block on indices [lo, hi] built from the LM
// factorization: Θ_j = ((conj α_j, ρ_j), (ρ_j, -α_j)) acting on (j, j+1),
// L carries the even-index blocks and M the odd ones.  Entries with both
// factors fully inside the range are exact; rows/cols near the edges are not.
class DenseCmvOracle {
 public:
  DenseCmvOracle(const occwalk::VerblunskySequence& alphas, long lo, long hi)
      : lo_(lo), n_(static_cast<std::size_t>(hi - lo + 1)) {
    std::vector<cplx> lmat(n_ * n_), mmat(n_ * n_);
    auto ident = [this](std::vector<cplx>& m) {
      for (std::size_t i = 0; i < n_; ++i) m[i * n_ + i] = 1.0;
    };
    ident(lmat);
    ident(mmat);
    for (long j = lo; j < hi; ++j) {
      const cplx a = alphas.alpha(j);
      const double r = std::sqrt(std::max(0.0, 1.0 - std::norm(a)));
      std::vector<cplx>& target = (j % 2 == 0) ? lmat : mmat;
      const std::size_t p = static_cast<std::size_t>(j - lo);
      target[p * n_ + p] = std::conj(a);
      target[p * n_ + p + 1] = r;
      target[(p + 1) * n_ + p] = r;
      target[(p + 1) * n_ + p + 1] = -a;
    }
    e_.assign(n_ * n_, cplx{});
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t k = 0; k < n_; ++k) {
        if (lmat[i * n_ + k] == cplx{}) continue;
        for (std::size_t c = 0; c < n_; ++c) {
          e_[i * n_ + c] += lmat[i * n_ + k] * mmat[k * n_ + c];
        }
      }
    }
  }

  cplx entry(long row, long col) const {
    return e_[static_cast<std::size_t>(row - lo_) * n_ +
              static_cast<std::size_t>(col - lo_)];
  }

 private:
  long lo_;
  std::size_t n_;
  std::vector<cplx> e_;
};

// Monic degree-m orthogonal polynomial from the moment data by a dense exact
// solve of the orthogonality system (independent of the Szegő recursion);
// returns α_{m-1} = -Φ_m(0).
inline mpq_class toeplitz_alpha(const std::vector<mpq_class>& c, int m) {
  // unknowns φ_0..φ_{m-1}; equations Σ_i φ_i c_{i-k} = -c_{m-k}, k = 0..m-1
  auto moment = [&c](long idx) -> mpq_class {
    return c[static_cast<std::size_t>(idx < 0 ? -idx : idx)];
  };
  const int n = m;
  std::vector<std::vector<mpq_class>> a(
      static_cast<std::size_t>(n),
      std::vector<mpq_class>(static_cast<std::size_t>(n) + 1));
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      a[k][i] = moment(i - k);
    }
    a[k][static_cast<std::size_t>(n)] = -moment(m - k);
  }
  // exact Gaussian elimination with partial pivoting on nonzero entries
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int row = col; row < n; ++row) {
      if (a[row][col] != 0) {
        pivot = row;
        break;
      }
    }
    if (pivot < 0) throw std::runtime_error("singular Toeplitz system");
    std::swap(a[col], a[pivot]);
    for (int row = 0; row < n; ++row) {
      if (row == col || a[row][col] == 0) continue;
      mpq_class f = a[row][col] / a[col][col];
      for (int j = col; j <= n; ++j) a[row][j] -= f * a[col][j];
    }
  }
  mpq_class phi0 = a[0][static_cast<std::size_t>(n)] / a[0][0];
  return -phi0;
}

// Hermitian check: max entrywise |H - H†| over the active square.
inline double hermitian_defect(const occwalk::DenseBlock& b,
                               occwalk::IndexRange act) {
  double worst = 0.0;
  for (std::size_t r = act.lo; r <= act.hi; ++r) {
    for (std::size_t c = act.lo; c <= act.hi; ++c) {
      worst = std::max(worst, std::abs(b.at(r, c) - std::conj(b.at(c, r))));
    }
  }
  return worst;
}

// Smallest-eigenvalue bound via Cholesky: H + shift·I is positive definite
// iff λ_min(H) > -shift, which is what the factorization decides.
inline bool psd_within(const occwalk::DenseBlock& b, occwalk::IndexRange act,
                       double shift) {
  const std::size_t n = act.size();
  std::vector<cplx> a(n * n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      a[r * n + c] = b.at(act.lo + r, act.lo + c);
    }
    a[r * n + r] += shift;
  }
  for (std::size_t k = 0; k < n; ++k) {
    double d = a[k * n + k].real();
    for (std::size_t j = 0; j < k; ++j) d -= std::norm(a[k * n + j]);
    if (d <= 0.0) return false;
    const double l = std::sqrt(d);
    a[k * n + k] = l;
    for (std::size_t i = k + 1; i < n; ++i) {
      cplx s = a[i * n + k];
      for (std::size_t j = 0; j < k; ++j) {
        s -= a[i * n + j] * std::conj(a[k * n + j]);
      }
      a[i * n + k] = s / l;
    }
  }
  return true;
}

}  // namespace testutil
