#pragma once

#include <cstddef>

#include "occwalk/common.hpp"

// Elementwise complex kernels behind the banded-operator application.  A
// scalar reference implementation is always available; an AVX2+FMA variant is
// selected at runtime when the CPU supports it.  The two are equivalence
// tested against each other.  Reductions that feed reported probabilities use
// a fixed-order pairwise sum so results do not depend on thread count.

namespace occwalk::kern {

enum class Isa { scalar, avx2 };

struct Ops {
  // y[i] += a * x[i]
  void (*axpy)(cplx a, const cplx* x, cplx* y, std::size_t n);
  // y[i] += w[i] * x[i]
  void (*mul_acc)(const cplx* w, const cplx* x, cplx* y, std::size_t n);
  // y[i] += conj(w[i]) * x[i]
  void (*conj_mul_acc)(const cplx* w, const cplx* x, cplx* y, std::size_t n);
  // y[i] *= a
  void (*scale)(cplx a, cplx* y, std::size_t n);
};

// Active implementation.  Honors the OCCWALK_ISA environment variable
// ("scalar" or "avx2") on first use.
const Ops& ops();
Isa active_isa();
void force_isa(Isa isa);
bool cpu_has_avx2();

double pairwise_sum(const double* x, std::size_t n);
cplx pairwise_sum(const cplx* x, std::size_t n);

namespace scalar {
void axpy(cplx a, const cplx* x, cplx* y, std::size_t n);
void mul_acc(const cplx* w, const cplx* x, cplx* y, std::size_t n);
void conj_mul_acc(const cplx* w, const cplx* x, cplx* y, std::size_t n);
void scale(cplx a, cplx* y, std::size_t n);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define OCCWALK_HAVE_AVX2_KERNELS 1
namespace avx2 {
void axpy(cplx a, const cplx* x, cplx* y, std::size_t n);
void mul_acc(const cplx* w, const cplx* x, cplx* y, std::size_t n);
void conj_mul_acc(const cplx* w, const cplx* x, cplx* y, std::size_t n);
void scale(cplx a, cplx* y, std::size_t n);
}  // namespace avx2
#endif

}  // namespace occwalk::kern
