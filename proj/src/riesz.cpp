#include "occwalk/riesz.hpp"

#include <cmath>
#include <cstdio>
#include <memory>
#include <mutex>

#include "occwalk/cmv.hpp"

namespace occwalk::riesz {

Rational riesz_moment(long m, int depth) {
  if (m < 0) m = -m;
  if (m == 0) return 1;
  // Balanced base-4 digits of m/4 over levels 1..depth.  Digits are unique
  // when they exist since |Σ_{j<k} ε_j 4^j| < 4^k / 2.
  if (m % 4 != 0) return 0;
  long rest = m / 4;
  int nonzero = 0;
  int level = 1;
  while (rest != 0) {
    if (level > depth) return 0;
    long digit = rest % 4;
    if (digit < 0) digit += 4;
    if (digit == 1) {
      ++nonzero;
      rest -= 1;
    } else if (digit == 3) {
      ++nonzero;
      rest += 1;
    } else if (digit == 2) {
      return 0;
    }
    rest /= 4;
    ++level;
  }
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), 2, static_cast<unsigned long>(nonzero));
  return Rational(1, den);
}

MomentSequence riesz_moments(int max_order, int depth) {
  if (max_order < 0) throw std::domain_error("max_order must be >= 0");
  if (depth < 1) throw std::domain_error("truncation depth must be >= 1");
  MomentSequence out;
  out.depth = depth;
  out.c.reserve(static_cast<std::size_t>(max_order) + 1);
  for (long m = 0; m <= max_order; ++m) out.c.push_back(riesz_moment(m, depth));
  return out;
}

double truncated_density(double theta, int depth) {
  double d = 1.0;
  double scale = 4.0;
  for (int k = 1; k <= depth; ++k) {
    d *= 1.0 + std::cos(scale * theta);
    scale *= 4.0;
  }
  return d;
}

// ---------------------------------------------------------------------------
// Szegő recursion on exact rational moments.  Monic orthogonal polynomials
// Φ_{j+1}(z) = z Φ_j(z) - α_j Φ*_j(z) with
//   α_j = <1, zΦ_j> / <1, Φ*_j>,   <z^a, z^b> = c_{b-a},
// valid for real symmetric moments (c_m = c_{-m} real), which makes every α_j
// real.  <1, Φ*_j> equals ||Φ_j||², so positivity of the denominators is
// exactly positive definiteness of the Toeplitz minors.
// ---------------------------------------------------------------------------

namespace {

class SzegoRecursion {
 public:
  explicit SzegoRecursion(std::function<Rational(long)> moment)
      : moment_(std::move(moment)), phi_{Rational(1)} {}

  // α_j for the current step, then advance.
  Rational next_alpha() {
    const std::size_t j = phi_.size() - 1;  // degree of Φ_j
    Rational num = 0, den = 0;
    for (std::size_t i = 0; i <= j; ++i) {
      num += phi_[i] * moment(static_cast<long>(i) + 1);
      den += phi_[j - i] * moment(static_cast<long>(i));
    }
    if (den <= 0) {
      throw invalid_measure(
          "moment matrix not positive definite at minor size " +
          std::to_string(j + 1));
    }
    Rational alpha = num / den;
    if (!(abs(alpha) < 1)) {
      throw invalid_measure("recovered |α_" + std::to_string(j) + "| >= 1");
    }
    if (abs(alpha) >= 1 - Rational(1, 1000000000000L)) {
      std::fprintf(stderr,
                   "warning: |α_%zu| within 1e-12 of 1; the recursion is "
                   "poorly conditioned past this index\n",
                   j);
    }
    // Φ_{j+1} = z Φ_j - α_j Φ*_j, with Φ*_j the reversed coefficient vector.
    std::vector<Rational> next(j + 2);
    for (std::size_t i = 0; i <= j; ++i) next[i + 1] = phi_[i];
    for (std::size_t i = 0; i <= j; ++i) next[i] -= alpha * phi_[j - i];
    phi_ = std::move(next);
    return alpha;
  }

 private:
  Rational moment(long m) {
    const std::size_t idx = static_cast<std::size_t>(m);
    while (cache_.size() <= idx) {
      cache_.push_back(moment_(static_cast<long>(cache_.size())));
    }
    return cache_[idx];
  }

  std::function<Rational(long)> moment_;
  std::vector<Rational> cache_;
  std::vector<Rational> phi_;
};

}  // namespace

std::vector<Rational> verblunsky_from_moments(const MomentSequence& moments,
                                              int count) {
  if (count < 0) throw std::domain_error("count must be >= 0");
  if (moments.c.empty() || moments.c[0] != 1) {
    throw invalid_measure("moments must start with c_0 = 1");
  }
  if (moments.max_order() < static_cast<std::size_t>(count)) {
    throw invalid_measure("need moments up to order " + std::to_string(count));
  }
  SzegoRecursion rec([&moments](long m) {
    return moments.c[static_cast<std::size_t>(m)];
  });
  std::vector<Rational> alphas;
  alphas.reserve(static_cast<std::size_t>(count));
  for (int j = 0; j < count; ++j) alphas.push_back(rec.next_alpha());
  return alphas;
}

double cmv_moment_check(const std::vector<double>& alphas,
                        const MomentSequence& moments, int max_order) {
  if (max_order < 0) throw std::domain_error("max_order must be >= 0");
  if (moments.max_order() < static_cast<std::size_t>(max_order)) {
    throw std::domain_error("moment sequence shorter than max_order");
  }
  // <δ_0, C^m δ_0>: powers of C spread two indices per step.
  const std::size_t dim = 2 * static_cast<std::size_t>(max_order) + 4;
  if (alphas.size() + 1 < dim) {
    throw window_mismatch("need at least " + std::to_string(dim - 1) +
                          " coefficients for order " +
                          std::to_string(max_order));
  }
  auto seq = VerblunskySequence(
      [&alphas](long j) -> cplx {
        return cplx(alphas[static_cast<std::size_t>(j)], 0.0);
      },
      "moment-check");
  BandedUnitary c = build_cmv_semi_infinite(seq, dim);
  cvec v(dim);
  v[0] = 1.0;
  double worst = 0.0;
  for (int m = 0; m <= max_order; ++m) {
    const double cm = moments.c[static_cast<std::size_t>(m)].get_d();
    worst = std::max(worst, std::abs(v[0] - cplx(cm, 0.0)));
    if (m == max_order) break;
    cvec next(dim);
    c.apply_range(v.data(), next.data(), {0, dim - 1}, {0, dim - 1});
    v = std::move(next);
  }
  return worst;
}

namespace {

// Progressive Riesz coefficient table shared by lazy walk sequences.
class RieszAlphaTable {
 public:
  explicit RieszAlphaTable(int depth)
      : depth_(depth),
        rec_([depth](long m) { return riesz_moment(m, depth); }) {}

  double alpha(std::size_t j) {
    std::lock_guard<std::mutex> lock(mu_);
    while (alphas_.size() <= j) {
      alphas_.push_back(rec_.next_alpha().get_d());
    }
    return alphas_[j];
  }

 private:
  int depth_;
  SzegoRecursion rec_;
  std::vector<double> alphas_;
  std::mutex mu_;
};

}  // namespace

VerblunskySequence riesz_walk_alphas_lazy(cplx alpha_minus_one, int depth) {
  auto table = std::make_shared<RieszAlphaTable>(depth);
  auto nonneg = [table](long j) -> cplx {
    if (j < 0) throw incomplete_model("negative index in nonnegative table");
    return cplx(table->alpha(static_cast<std::size_t>(j)), 0.0);
  };
  return fair_extend(VerblunskySequence(std::move(nonneg), "riesz"),
                     alpha_minus_one);
}

VerblunskySequence riesz_walk_alphas(int count, cplx alpha_minus_one,
                                     int depth) {
  if (count < 1) throw std::domain_error("count must be >= 1");
  MomentSequence moments = riesz_moments(count, depth);
  std::vector<Rational> exact = verblunsky_from_moments(moments, count);
  std::vector<cplx> table;
  table.reserve(exact.size());
  for (const Rational& a : exact) table.emplace_back(a.get_d(), 0.0);
  return fair_extend(std::move(table), alpha_minus_one);
}

}  // namespace occwalk::riesz
