#pragma once

#include <complex>
#include <cstdlib>
#include <new>
#include <stdexcept>
#include <string>
#include <vector>

namespace occwalk {

using cplx = std::complex<double>;

inline constexpr const char* version_string = "0.1.0";

// ---------------------------------------------------------------------------
// Error types. The CLI maps these to exit codes: invalid input -> 2,
// engine guards and light-cone violations -> 3, I/O -> 4.
// ---------------------------------------------------------------------------

struct invalid_window : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct invalid_coefficient : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct incomplete_model : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct window_mismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct engine_guard : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct light_cone_violation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct invalid_measure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// 32-byte aligned storage for complex amplitude arrays so the vector kernels
// can use full-width loads on the row starts.
// ---------------------------------------------------------------------------

template <class T, std::size_t Align>
struct AlignedAllocator {
  using value_type = T;

  template <class U>
  struct rebind {
    using other = AlignedAllocator<U, Align>;
  };

  AlignedAllocator() noexcept = default;
  template <class U>
  AlignedAllocator(const AlignedAllocator<U, Align>&) noexcept {}

  T* allocate(std::size_t n) {
    std::size_t bytes = n * sizeof(T);
    bytes = (bytes + Align - 1) / Align * Align;
    void* p = std::aligned_alloc(Align, bytes);
    if (p == nullptr) throw std::bad_alloc();
    return static_cast<T*>(p);
  }

  void deallocate(T* p, std::size_t) noexcept { std::free(p); }

  template <class U>
  bool operator==(const AlignedAllocator<U, Align>&) const noexcept {
    return true;
  }
};

using cvec = std::vector<cplx, AlignedAllocator<cplx, 32>>;

}  // namespace occwalk
