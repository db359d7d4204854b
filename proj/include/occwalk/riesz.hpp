#pragma once

#include <gmpxx.h>

#include <vector>

#include "occwalk/coin.hpp"

// Trigonometric moments of the truncated Riesz product
//   Π_{k=1..K} (1 + cos(4^k θ)) dθ/2π,
// recovery of Verblunsky coefficients from moments by the Szegő recursion on
// the Toeplitz moment data, and the consistency check that reconstructs the
// moments from the semi-infinite CMV operator.

namespace occwalk::riesz {

using Rational = mpq_class;

struct MomentSequence {
  std::vector<Rational> c;  // c[m] = ∫ z^m dμ for m = 0..M; c_{-m} = c_m
  int depth = 0;            // truncation depth K
  std::size_t max_order() const { return c.size() - 1; }
};

// Exact rational moments via the lacunary ±4^k representation: c_m = 2^{-t}
// with t the number of nonzero digits of m in balanced base 4 over levels
// 1..depth, and 0 when no such representation exists.  For m <= 4^K / 2 the
// value is independent of the depth K.
MomentSequence riesz_moments(int max_order, int depth);
Rational riesz_moment(long m, int depth);

// Density of the truncated product at angle θ.
double truncated_density(double theta, int depth);

// α_0 .. α_{count-1} of the measure with the given moments, exact.  Requires
// positive-definite Toeplitz minors; throws invalid_measure otherwise.
std::vector<Rational> verblunsky_from_moments(const MomentSequence& moments,
                                              int count);

// Builds the semi-infinite CMV operator from α_0, α_1, ... and returns
// max_m |<δ_0, C^m δ_0> - c_m| over m <= max_order.
double cmv_moment_check(const std::vector<double>& alphas,
                        const MomentSequence& moments, int max_order);

// Fair extension of the Riesz coefficients to the integers; `count` is the
// number of nonnegative-index coefficients computed up front.
VerblunskySequence riesz_walk_alphas(int count, cplx alpha_minus_one = {},
                                     int depth = 6);

// Same sequence, extending the Szegő recursion on demand; used by the model
// catalog where the needed index range depends on the window.
VerblunskySequence riesz_walk_alphas_lazy(cplx alpha_minus_one, int depth = 6);

}  // namespace occwalk::riesz
