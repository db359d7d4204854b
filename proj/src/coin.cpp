#include "occwalk/coin.hpp"

#include <cmath>

#include "occwalk/riesz.hpp"

namespace occwalk {

double Coin::unitarity_defect() const {
  // C†C entries
  const cplx g11 = std::conj(c11) * c11 + std::conj(c21) * c21;
  const cplx g12 = std::conj(c11) * c12 + std::conj(c21) * c22;
  const cplx g22 = std::conj(c12) * c12 + std::conj(c22) * c22;
  double d = std::abs(g11 - 1.0);
  d = std::max(d, std::abs(g22 - 1.0));
  d = std::max(d, std::abs(g12));
  return d;
}

namespace {

void check_modulus(const cplx& alpha) {
  if (!(std::abs(alpha) < 1.0)) {
    throw invalid_coefficient("Verblunsky coefficient must have modulus < 1");
  }
}

}  // namespace

Coin coin_from_alpha(cplx alpha) {
  check_modulus(alpha);
  const double rho = std::sqrt(1.0 - std::norm(alpha));
  return Coin{cplx(rho, 0.0), -alpha, std::conj(alpha), cplx(rho, 0.0)};
}

Coin coin_from_alpha(const mpq_class& alpha) {
  if (!(abs(alpha) < 1)) {
    throw invalid_coefficient("Verblunsky coefficient must have modulus < 1");
  }
  mpq_class rho2 = 1 - alpha * alpha;
  // For Pythagorean parameters (3/5, 12/13, ...) the square root is exact.
  mpz_class num_root, den_root;
  double rho;
  if (mpz_perfect_square_p(rho2.get_num_mpz_t()) &&
      mpz_perfect_square_p(rho2.get_den_mpz_t())) {
    mpz_sqrt(num_root.get_mpz_t(), rho2.get_num_mpz_t());
    mpz_sqrt(den_root.get_mpz_t(), rho2.get_den_mpz_t());
    rho = mpq_class(num_root, den_root).get_d();
  } else {
    rho = std::sqrt(rho2.get_d());
  }
  const double a = alpha.get_d();
  return Coin{cplx(rho, 0.0), cplx(-a, 0.0), cplx(a, 0.0), cplx(rho, 0.0)};
}

Coin hadamard_coin() {
  const double r = 1.0 / std::sqrt(2.0);
  return Coin{cplx(r, 0.0), cplx(r, 0.0), cplx(r, 0.0), cplx(-r, 0.0)};
}

VerblunskySequence::VerblunskySequence(Eval eval, std::string description)
    : eval_(std::move(eval)), desc_(std::move(description)) {
  if (!eval_) throw incomplete_model("null Verblunsky evaluator");
}

cplx VerblunskySequence::alpha(long j) const {
  cplx a = eval_(j);
  if (!(std::abs(a) < 1.0)) {
    throw invalid_coefficient("|α_" + std::to_string(j) + "| >= 1");
  }
  return a;
}

double VerblunskySequence::rho(long j) const {
  return std::sqrt(1.0 - std::norm(alpha(j)));
}

VerblunskySequence fair_extend(VerblunskySequence nonneg,
                               cplx alpha_minus_one) {
  check_modulus(alpha_minus_one);
  auto eval = [seq = std::move(nonneg), alpha_minus_one](long j) -> cplx {
    if (j >= 0) return seq.alpha(j);
    if (j == -1) return alpha_minus_one;
    return seq.alpha(-2 - j);
  };
  return VerblunskySequence(std::move(eval), "fair");
}

VerblunskySequence fair_extend(std::vector<cplx> table, cplx alpha_minus_one) {
  for (const cplx& a : table) check_modulus(a);
  auto nonneg = [t = std::move(table)](long j) -> cplx {
    if (j < 0 || static_cast<std::size_t>(j) >= t.size()) {
      throw incomplete_model("coefficient index " + std::to_string(j) +
                             " outside table");
    }
    return t[static_cast<std::size_t>(j)];
  };
  return fair_extend(VerblunskySequence(std::move(nonneg), "table"),
                     alpha_minus_one);
}

RationalCoinData polynomial_coin_alpha(long i) {
  if (i < 0 || i % 2 != 0) {
    throw std::domain_error(
        "polynomial coin coefficient defined for even i >= 0; odd-index "
        "coefficients vanish");
  }
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(i + 1), 10);
  mpz_class q;
  mpz_ui_pow_ui(q.get_mpz_t(), static_cast<unsigned long>(i + 1), 5);
  RationalCoinData out;
  out.alpha = mpq_class(p - 1, p + 1);
  out.alpha.canonicalize();
  out.rho = mpq_class(2 * q, p + 1);
  out.rho.canonicalize();
  return out;
}

ModelSpec ModelSpec::hadamard() { return ModelSpec{}; }

ModelSpec ModelSpec::constant(const mpq_class& alpha) {
  if (!(alpha > -1 && alpha < 1)) {
    throw invalid_coefficient("constant-coin α must lie in (-1, 1)");
  }
  ModelSpec m;
  m.kind = Kind::constant;
  m.alpha = alpha;
  return m;
}

ModelSpec ModelSpec::polynomial() {
  ModelSpec m;
  m.kind = Kind::polynomial_coin;
  return m;
}

ModelSpec ModelSpec::riesz(cplx alpha_minus_one, int depth) {
  if (depth < 1) throw invalid_coefficient("Riesz truncation depth must be >= 1");
  check_modulus(alpha_minus_one);
  ModelSpec m;
  m.kind = Kind::riesz;
  m.alpha_minus_one = alpha_minus_one;
  m.riesz_depth = depth;
  return m;
}

std::string ModelSpec::name() const {
  switch (kind) {
    case Kind::hadamard:
      return "hadamard";
    case Kind::constant:
      return "constant(" + alpha.get_str() + ")";
    case Kind::polynomial_coin:
      return "polynomial-coin";
    case Kind::riesz:
      return "riesz(depth=" + std::to_string(riesz_depth) + ")";
  }
  return "?";
}

namespace {

// Site coin of a fair even-index sequence: C_s is built from α_{2s}; the fair
// rule α_j = α_{-2-j} makes C_s = C_{-1-s} automatically.
std::function<Coin(long)> coins_from_even_alphas(
    std::function<RationalCoinData(long)> even_alpha) {
  return [even_alpha = std::move(even_alpha)](long site) -> Coin {
    long j = 2 * site;
    if (j < 0) j = -2 - j;  // fair reflection; j stays even
    const RationalCoinData d = even_alpha(j);
    const double a = d.alpha.get_d();
    const double r = d.rho.get_d();
    return Coin{cplx(r, 0.0), cplx(-a, 0.0), cplx(a, 0.0), cplx(r, 0.0)};
  };
}

}  // namespace

CatalogEntry catalog(const ModelSpec& model) {
  CatalogEntry e;
  switch (model.kind) {
    case ModelSpec::Kind::hadamard: {
      e.coins = [](long) { return hadamard_coin(); };
      break;
    }
    case ModelSpec::Kind::constant: {
      const Coin c = coin_from_alpha(model.alpha);
      e.coins = [c](long) { return c; };
      const double a = model.alpha.get_d();
      auto nonneg = [a](long j) -> cplx {
        return j % 2 == 0 ? cplx(a, 0.0) : cplx{};
      };
      e.alphas = fair_extend(VerblunskySequence(nonneg, "constant"),
                             model.alpha_minus_one);
      break;
    }
    case ModelSpec::Kind::polynomial_coin: {
      e.coins = coins_from_even_alphas(
          [](long j) { return polynomial_coin_alpha(j); });
      auto nonneg = [](long j) -> cplx {
        if (j % 2 != 0) return cplx{};
        return cplx(polynomial_coin_alpha(j).alpha.get_d(), 0.0);
      };
      e.alphas = fair_extend(VerblunskySequence(nonneg, "polynomial"),
                             model.alpha_minus_one);
      break;
    }
    case ModelSpec::Kind::riesz: {
      e.alphas =
          riesz::riesz_walk_alphas_lazy(model.alpha_minus_one, model.riesz_depth);
      break;
    }
  }
  return e;
}

}  // namespace occwalk
