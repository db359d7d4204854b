#include "occwalk/kernels.hpp"

#include <cstring>

namespace occwalk::kern {

namespace {

Ops make_ops(Isa isa) {
#if defined(OCCWALK_HAVE_AVX2_KERNELS)
  if (isa == Isa::avx2) {
    return Ops{&avx2::axpy, &avx2::mul_acc, &avx2::conj_mul_acc, &avx2::scale};
  }
#endif
  (void)isa;
  return Ops{&scalar::axpy, &scalar::mul_acc, &scalar::conj_mul_acc,
             &scalar::scale};
}

Isa default_isa() {
  const char* env = std::getenv("OCCWALK_ISA");
  if (env != nullptr) {
    if (std::strcmp(env, "scalar") == 0) return Isa::scalar;
    if (std::strcmp(env, "avx2") == 0) return Isa::avx2;
  }
  return cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
}

struct Dispatch {
  Isa isa;
  Ops ops;
  Dispatch() : isa(default_isa()), ops(make_ops(isa)) {}
};

Dispatch& dispatch() {
  static Dispatch d;
  return d;
}

}  // namespace

bool cpu_has_avx2() {
#if defined(OCCWALK_HAVE_AVX2_KERNELS)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Ops& ops() { return dispatch().ops; }

Isa active_isa() { return dispatch().isa; }

void force_isa(Isa isa) {
  dispatch().isa = isa;
  dispatch().ops = make_ops(isa);
}

namespace {

template <class T>
T pairwise_sum_impl(const T* x, std::size_t n) {
  if (n <= 16) {
    T s{};
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum_impl(x, h) + pairwise_sum_impl(x + h, n - h);
}

}  // namespace

double pairwise_sum(const double* x, std::size_t n) {
  return pairwise_sum_impl(x, n);
}

cplx pairwise_sum(const cplx* x, std::size_t n) {
  return pairwise_sum_impl(x, n);
}

}  // namespace occwalk::kern
