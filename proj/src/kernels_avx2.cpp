#include "occwalk/kernels.hpp"

#if defined(OCCWALK_HAVE_AVX2_KERNELS)

#include <immintrin.h>

// Complex doubles stored interleaved (re, im); one __m256d holds two values.
// Multiply recipe: with xs the (im, re)-swapped operand,
//   fmaddsub(x, re(w), xs * im(w))  ->  (xr*wr - xi*wi, xi*wr + xr*wi)
//   fmsubadd(x, re(w), xs * im(w))  ->  (xr*wr + xi*wi, xi*wr - xr*wi)
// the second form being multiplication by conj(w).

namespace occwalk::kern::avx2 {

void axpy(cplx a, const cplx* x, cplx* y, std::size_t n) {
  const double* xp = reinterpret_cast<const double*>(x);
  double* yp = reinterpret_cast<double*>(y);
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  const std::size_t n2 = 2 * n;
  std::size_t i = 0;
  for (; i + 4 <= n2; i += 4) {
    __m256d xv = _mm256_loadu_pd(xp + i);
    __m256d yv = _mm256_loadu_pd(yp + i);
    __m256d xs = _mm256_permute_pd(xv, 0x5);
    __m256d r = _mm256_fmaddsub_pd(xv, ar, _mm256_mul_pd(xs, ai));
    _mm256_storeu_pd(yp + i, _mm256_add_pd(yv, r));
  }
  for (; i < n2; i += 2) {
    const double xr = xp[i], xi = xp[i + 1];
    yp[i] += a.real() * xr - a.imag() * xi;
    yp[i + 1] += a.real() * xi + a.imag() * xr;
  }
}

void mul_acc(const cplx* w, const cplx* x, cplx* y, std::size_t n) {
  const double* wp = reinterpret_cast<const double*>(w);
  const double* xp = reinterpret_cast<const double*>(x);
  double* yp = reinterpret_cast<double*>(y);
  const std::size_t n2 = 2 * n;
  std::size_t i = 0;
  for (; i + 4 <= n2; i += 4) {
    __m256d wv = _mm256_loadu_pd(wp + i);
    __m256d xv = _mm256_loadu_pd(xp + i);
    __m256d yv = _mm256_loadu_pd(yp + i);
    __m256d wr = _mm256_movedup_pd(wv);
    __m256d wi = _mm256_permute_pd(wv, 0xF);
    __m256d xs = _mm256_permute_pd(xv, 0x5);
    __m256d r = _mm256_fmaddsub_pd(xv, wr, _mm256_mul_pd(xs, wi));
    _mm256_storeu_pd(yp + i, _mm256_add_pd(yv, r));
  }
  for (; i < n2; i += 2) {
    const double wr = wp[i], wi = wp[i + 1];
    const double xr = xp[i], xi = xp[i + 1];
    yp[i] += wr * xr - wi * xi;
    yp[i + 1] += wr * xi + wi * xr;
  }
}

void conj_mul_acc(const cplx* w, const cplx* x, cplx* y, std::size_t n) {
  const double* wp = reinterpret_cast<const double*>(w);
  const double* xp = reinterpret_cast<const double*>(x);
  double* yp = reinterpret_cast<double*>(y);
  const std::size_t n2 = 2 * n;
  std::size_t i = 0;
  for (; i + 4 <= n2; i += 4) {
    __m256d wv = _mm256_loadu_pd(wp + i);
    __m256d xv = _mm256_loadu_pd(xp + i);
    __m256d yv = _mm256_loadu_pd(yp + i);
    __m256d wr = _mm256_movedup_pd(wv);
    __m256d wi = _mm256_permute_pd(wv, 0xF);
    __m256d xs = _mm256_permute_pd(xv, 0x5);
    __m256d r = _mm256_fmsubadd_pd(xv, wr, _mm256_mul_pd(xs, wi));
    _mm256_storeu_pd(yp + i, _mm256_add_pd(yv, r));
  }
  for (; i < n2; i += 2) {
    const double wr = wp[i], wi = wp[i + 1];
    const double xr = xp[i], xi = xp[i + 1];
    yp[i] += wr * xr + wi * xi;
    yp[i + 1] += wr * xi - wi * xr;
  }
}

void scale(cplx a, cplx* y, std::size_t n) {
  double* yp = reinterpret_cast<double*>(y);
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  const std::size_t n2 = 2 * n;
  std::size_t i = 0;
  for (; i + 4 <= n2; i += 4) {
    __m256d yv = _mm256_loadu_pd(yp + i);
    __m256d ys = _mm256_permute_pd(yv, 0x5);
    __m256d r = _mm256_fmaddsub_pd(yv, ar, _mm256_mul_pd(ys, ai));
    _mm256_storeu_pd(yp + i, r);
  }
  for (; i < n2; i += 2) {
    const double yr = yp[i], yi = yp[i + 1];
    yp[i] = a.real() * yr - a.imag() * yi;
    yp[i + 1] = a.real() * yi + a.imag() * yr;
  }
}

}  // namespace occwalk::kern::avx2

#endif  // OCCWALK_HAVE_AVX2_KERNELS
