#include "occwalk/kernels.hpp"

namespace occwalk::kern::scalar {

void axpy(cplx a, const cplx* x, cplx* y, std::size_t n) {
  const double ar = a.real(), ai = a.imag();
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    y[i] += cplx(ar * xr - ai * xi, ar * xi + ai * xr);
  }
}

void mul_acc(const cplx* w, const cplx* x, cplx* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double wr = w[i].real(), wi = w[i].imag();
    const double xr = x[i].real(), xi = x[i].imag();
    y[i] += cplx(wr * xr - wi * xi, wr * xi + wi * xr);
  }
}

void conj_mul_acc(const cplx* w, const cplx* x, cplx* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double wr = w[i].real(), wi = w[i].imag();
    const double xr = x[i].real(), xi = x[i].imag();
    y[i] += cplx(wr * xr + wi * xi, wr * xi - wi * xr);
  }
}

void scale(cplx a, cplx* y, std::size_t n) {
  const double ar = a.real(), ai = a.imag();
  for (std::size_t i = 0; i < n; ++i) {
    const double yr = y[i].real(), yi = y[i].imag();
    y[i] = cplx(ar * yr - ai * yi, ar * yi + ai * yr);
  }
}

}  // namespace occwalk::kern::scalar
