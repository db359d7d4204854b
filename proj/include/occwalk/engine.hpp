#pragma once

#include <vector>

#include "occwalk/cmv.hpp"

// Monitored occupation time: a projective positive/negative measurement after
// every unitary step.  P(N_n = r) sums the Born-rule weights of all
// projection sequences containing r positive outcomes.  Three engines:
//
//   brute_force        exponential enumeration of projection sequences; the
//                      oracle the other two are validated against
//   density_recursion  ledger of blocks ρ_{k,j} (j positive outcomes so far)
//                      advanced by ρ_{k+1,j} = QUρ_{k,j}U†Q + PUρ_{k,j-1}U†P;
//                      p_r = tr ρ_{n,r}
//   transform_recursion one block per phase θ, ρ <- QUρU†Q + e^{iθ}PUρU†P;
//                      the traces at the n+1 roots of unity are the DFT of
//                      (p_r), inverted directly.  Memory-lean and parallel
//                      over phases.

namespace occwalk {

struct EngineDiagnostics {
  double pre_clamp_sum = 0.0;   // Σ p_r before clamping
  double boundary_mass = 0.0;   // max mass seen on the outermost sites
  double min_prob = 0.0;        // most negative probability before clamping
  double max_imag = 0.0;        // largest |Im p_r| discarded (transform)
};

struct OccupationDistribution {
  long steps = 0;
  std::vector<double> probs;  // P(N_n = r), r = 0..n, clamped to [0, 1]
  EngineDiagnostics diag;
};

std::vector<double> cdf(const OccupationDistribution& d);

inline constexpr long brute_force_max_steps = 20;
inline constexpr double boundary_mass_limit = 1e-12;

OccupationDistribution brute_force(const BandedUnitary& u,
                                   const StateVector& psi, long n);

OccupationDistribution density_recursion(const BandedUnitary& u,
                                         const StateVector& psi, long n);

OccupationDistribution transform_recursion(const BandedUnitary& u,
                                           const StateVector& psi, long n,
                                           unsigned threads = 1);

// Born-rule bookkeeping behind density_recursion, exposed so the block
// invariants (Hermitian, positive semidefinite, trace sums) are testable.
class DensityLedger {
 public:
  DensityLedger(const BandedUnitary& u, const StateVector& psi);

  void step();
  long current_step() const { return k_; }
  std::size_t block_count() const { return blocks_.size(); }
  const DenseBlock& block(std::size_t j) const { return blocks_[j]; }
  IndexRange active() const;

  std::vector<double> probabilities() const;  // tr ρ_{k,j}, before clamping
  double trace_sum() const;
  double boundary_mass() const;

 private:
  const BandedUnitary* u_;
  long k_ = 0;
  long cone_lo_, cone_hi_;  // support bounds in CMV index labels
  std::vector<DenseBlock> blocks_;
  DenseBlock conj_tmp_, conj_out_, pp_prev_;
};

// Suggested window half-width for an n-step monitored run: the light cone
// reaches site |i| = k + 1 after k steps, so half-width n + 2 keeps the two
// outermost sites exactly empty.
inline long default_half_width(long n) { return n + 2; }

}  // namespace occwalk
