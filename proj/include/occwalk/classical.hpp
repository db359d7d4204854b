#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

// Exact occupation-time laws for the fair coin-tossing walk.  S_0 = 0 and
// S_k counts as positive when S_k > 0 or S_k = 0 with S_{k-1} > 0; N_n is the
// number of positive indices among S_1..S_n.  Everything closed-form is kept
// in exact rational arithmetic; path enumeration and Monte Carlo provide the
// independent checks.

namespace occwalk::classical {

using Rational = mpq_class;

// u_k = binom(k, k/2) / 2^k for even k >= 0.
Rational u(long k);

// P(N_{2n} = 2r) = u_{2r} u_{2n-2r}; odd occupation counts have probability 0
// at even times.
Rational chung_feller(long n, long r);

enum class TargetParity { even, odd };

// Odd-time supplements:
//   P(N_{2n+1} = 2r)   = u_{2r} u_{2n+2-2r} (n-r+1)/(n+1),  r = 0..n
//   P(N_{2n+1} = 2r-1) = u_{2r} u_{2n+2-2r} r/(n+1),        r = 1..n+1
Rational odd_step(long n, long r, TargetParity target);

// Full distribution of N_n from the closed forms, any n >= 0.
std::vector<Rational> exact_distribution(long n);

// Exhaustive 2^n path enumeration under the sign convention above.
std::vector<Rational> enumerate_paths(int n);
inline constexpr int enumerate_max_tosses = 24;

struct MonteCarloResult {
  std::vector<std::uint64_t> counts;  // histogram of N_n
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::string rng = "splitmix64";

  std::vector<double> frequencies() const;
};

// Counter-based splitmix64 draws, so results are identical for any chunking
// or thread count.
MonteCarloResult monte_carlo(int n, std::uint64_t trials, std::uint64_t seed,
                             unsigned threads = 1);

// F(x) = (2/π) asin(sqrt(x)) on [0, 1].
double arcsine_cdf(double x);

// Legendre polynomial by the three-term recurrence, P_n(1) = 1.
double legendre_p(int n, double x);

// Relative residual of Σ_{k=0..n} u_{2k} u_{2n-2k} q^{2k} against
// P_n((q + 1/q)/2) q^n.
double legendre_identity_residual(int n, double q);

}  // namespace occwalk::classical
