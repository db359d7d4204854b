#pragma once

#include <gmpxx.h>

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "occwalk/basis.hpp"

namespace occwalk {

// 2x2 unitary coin, row-major: rows are the amplitudes reaching |i+1,↑> and
// |i-1,↓> from the columns |i,↑>, |i,↓>.
struct Coin {
  cplx c11, c12, c21, c22;

  // Max entrywise deviation of C†C from the identity.
  double unitarity_defect() const;
};

// Coin in the Verblunsky-parametrized form: rows (ρ, -α), (conj α, ρ) with
// ρ = sqrt(1 - |α|²).
Coin coin_from_alpha(cplx alpha);
// Same, with an exact ρ when α is rational and 1 - α² is a perfect square.
Coin coin_from_alpha(const mpq_class& alpha);

Coin hadamard_coin();

// Doubly infinite sequence of Verblunsky coefficients, |α_j| < 1, evaluated
// lazily by index.
class VerblunskySequence {
 public:
  using Eval = std::function<cplx(long)>;

  explicit VerblunskySequence(Eval eval, std::string description = {});

  cplx alpha(long j) const;
  double rho(long j) const;
  const std::string& description() const { return desc_; }

 private:
  Eval eval_;
  std::string desc_;
};

// Extends α_j given for j >= 0 to the integers by the fair rule
// α_j = α_{-2-j}, with the free coefficient α_{-1} supplied separately.
VerblunskySequence fair_extend(VerblunskySequence nonneg, cplx alpha_minus_one);
VerblunskySequence fair_extend(std::vector<cplx> table, cplx alpha_minus_one);

// Even-index coefficient of the site-dependent polynomial coin model:
// α_i = ((i+1)^10 - 1)/((i+1)^10 + 1), ρ_i = 2(i+1)^5/((i+1)^10 + 1),
// for i >= 0 and even.  α² + ρ² = 1 exactly.
struct RationalCoinData {
  mpq_class alpha;
  mpq_class rho;
};
RationalCoinData polynomial_coin_alpha(long i);

struct ModelSpec {
  enum class Kind { hadamard, constant, polynomial_coin, riesz };

  Kind kind = Kind::hadamard;
  mpq_class alpha = 0;             // constant-coin parameter, real in (-1, 1)
  cplx alpha_minus_one{0.0, 0.0};  // free coefficient of the fair extension
  int riesz_depth = 6;             // Riesz product truncation depth

  static ModelSpec hadamard();
  static ModelSpec constant(const mpq_class& alpha);
  static ModelSpec polynomial();
  static ModelSpec riesz(cplx alpha_minus_one = {}, int depth = 6);

  std::string name() const;

  bool operator==(const ModelSpec&) const = default;
};

// Resolved model: a coin map for coined models, a Verblunsky sequence where
// one exists (Hadamard's coin is not of the (ρ, -α; conj α, ρ) form, so it
// carries no sequence; the Riesz walk is not coined and carries no coin map).
struct CatalogEntry {
  std::function<Coin(long)> coins;
  std::optional<VerblunskySequence> alphas;
};

CatalogEntry catalog(const ModelSpec& model);

}  // namespace occwalk
