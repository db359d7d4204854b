#include <doctest.h>

#include <map>
#include <memory>

#include "occwalk/cmv.hpp"
#include "occwalk/engine.hpp"
#include "occwalk/riesz.hpp"

#include "test_util.hpp"

using namespace occwalk;

namespace {

VerblunskySequence random_alphas(std::uint64_t seed, double max_mod = 0.9) {
  auto g = std::make_shared<std::mt19937_64>(seed);
  auto cache = std::make_shared<std::map<long, cplx>>();
  return VerblunskySequence(
      [g, cache, max_mod](long j) -> cplx {
        auto it = cache->find(j);
        if (it != cache->end()) return it->second;
        std::uniform_real_distribution<double> mod(0.0, max_mod);
        std::uniform_real_distribution<double> ph(0.0, 6.2831853);
        const cplx a = std::polar(mod(*g), ph(*g));
        (*cache)[j] = a;
        return a;
      },
      "random");
}

double max_entry_diff(const BandedUnitary& a, const BandedUnitary& b,
                      long flat_lo, long flat_hi) {
  double worst = 0.0;
  for (long r = flat_lo; r <= flat_hi; ++r) {
    for (long c = flat_lo; c <= flat_hi; ++c) {
      worst = std::max(worst, std::abs(a.entry(r, c) - b.entry(r, c)));
    }
  }
  return worst;
}

}  // namespace

TEST_SUITE_BEGIN("cmv");

TEST_CASE("identity coins give the bare shift") {
  const BandedUnitary u =
      build_coined([](long) { return coin_from_alpha(cplx{}); }, 6);
  for (long i = -5; i <= 5; ++i) {
    CHECK(u.entry(flat_of(i + 1, Spin::up), flat_of(i, Spin::up)) ==
          cplx(1.0, 0.0));
    CHECK(u.entry(flat_of(i - 1, Spin::down), flat_of(i, Spin::down)) ==
          cplx(1.0, 0.0));
    CHECK(u.entry(flat_of(i - 1, Spin::down), flat_of(i, Spin::up)) == cplx{});
  }
  CHECK(u.unitarity_defect() < 1e-15);
}

TEST_CASE("one Hadamard step of the initial state") {
  const long L = 4;
  const BandedUnitary u = build_for_model(ModelSpec::hadamard(), L);
  const StateVector psi = initial_state(L);
  const StateVector out = u.apply(psi);
  // U ψ = ((1+i)|1↑> + (1-i)|-1↓>)/2
  CHECK(std::abs(out.at(flat_of(1, Spin::up)) - cplx(0.5, 0.5)) < 1e-15);
  CHECK(std::abs(out.at(flat_of(-1, Spin::down)) - cplx(0.5, -0.5)) < 1e-15);
  double rest = 0.0;
  for (long f = out.window().lo; f <= out.window().hi; ++f) {
    if (f != flat_of(1, Spin::up) && f != flat_of(-1, Spin::down)) {
      rest += std::abs(out.at(f));
    }
  }
  CHECK(rest == 0.0);
}

TEST_CASE("two Hadamard steps of the initial state") {
  const long L = 4;
  const BandedUnitary u = build_for_model(ModelSpec::hadamard(), L);
  const StateVector out = u.apply(u.apply(initial_state(L)));
  // U²ψ = ((1+i)|2↑> + (1+i)|0↓> + (1-i)|0↑> - (1-i)|-2↓>) / (2√2)
  const double s = 1.0 / (2.0 * std::sqrt(2.0));
  CHECK(std::abs(out.at(flat_of(2, Spin::up)) - cplx(s, s)) < 1e-15);
  CHECK(std::abs(out.at(flat_of(0, Spin::down)) - cplx(s, s)) < 1e-15);
  CHECK(std::abs(out.at(flat_of(0, Spin::up)) - cplx(s, -s)) < 1e-15);
  CHECK(std::abs(out.at(flat_of(-2, Spin::down)) - cplx(-s, s)) < 1e-15);
  CHECK(out.norm2() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("coined construction is unitary for the catalog models") {
  CHECK(build_for_model(ModelSpec::constant(mpq_class(12, 13)), 64)
            .unitarity_defect() < 1e-10);
  CHECK(build_for_model(ModelSpec::hadamard(), 20).unitarity_defect() < 1e-12);
  CHECK(build_for_model(ModelSpec::polynomial(), 20).unitarity_defect() <
        1e-12);
}

TEST_CASE("display entries match the LM block factorization") {
  const VerblunskySequence alphas = random_alphas(77);
  testutil::DenseCmvOracle oracle(alphas, -12, 12);
  for (long r = -8; r <= 8; ++r) {
    for (long c = -8; c <= 8; ++c) {
      CHECK(std::abs(cmv_display_entry(alphas, r, c) - oracle.entry(r, c)) <
            1e-14);
    }
  }
}

TEST_CASE("zero coefficients make the display a permutation matrix") {
  const VerblunskySequence zero([](long) { return cplx{}; }, "free");
  for (long j = -6; j <= 6; ++j) {
    // ones exactly at the ρρ positions of the two displayed row kinds
    CHECK(cmv_display_entry(zero, 2 * j, 2 * j + 2) == cplx(1.0, 0.0));
    CHECK(cmv_display_entry(zero, 2 * j + 1, 2 * j - 1) == cplx(1.0, 0.0));
    for (long c = 2 * j - 2; c <= 2 * j + 2; ++c) {
      if (c != 2 * j + 2) CHECK(cmv_display_entry(zero, 2 * j, c) == cplx{});
      if (c != 2 * j - 1) {
        CHECK(cmv_display_entry(zero, 2 * j + 1, c) == cplx{});
      }
    }
  }
}

TEST_CASE("cmv alignment is an involution preserving the subspace split") {
  for (long f = -30; f <= 30; ++f) {
    CHECK(cmv_flat_alignment(cmv_flat_alignment(f)) == f);
    CHECK(positive_flat(f) == (cmv_flat_alignment(f) >= 1));
  }
}

TEST_CASE("cmv with vanishing odd coefficients equals the coined walk") {
  // the even coefficients of a fair constant model
  const ModelSpec model = ModelSpec::constant(mpq_class(3, 5));
  const CatalogEntry e = catalog(model);
  const long L = 8;
  const BandedUnitary uc = build_coined(e.coins, L);
  const BandedUnitary um = build_cmv(*e.alphas, L);
  // entrywise equality away from the boundary closures
  CHECK(max_entry_diff(uc, um, -2 * (L - 2), 2 * (L - 2) + 1) < 1e-15);
  CHECK(um.unitarity_defect() < 1e-12);

  // identical action on interior-supported states
  auto g = testutil::rng(5);
  const StateVector v = testutil::random_state(uc.window(), g, L - 3);
  const StateVector a = uc.apply(v);
  const StateVector b = um.apply(v.on_window(um.window()));
  for (long f = -2 * L; f <= 2 * L + 1; ++f) {
    CHECK(std::abs(a.at(f) - b.at(f)) < 1e-14);
  }
}

TEST_CASE("cmv and coined occupation distributions agree") {
  for (const ModelSpec& model :
       {ModelSpec::constant(mpq_class(3, 5)), ModelSpec::polynomial()}) {
    const CatalogEntry e = catalog(model);
    const long n = 10;
    const long L = default_half_width(n);
    const BandedUnitary uc = build_coined(e.coins, L);
    const BandedUnitary um = build_cmv(*e.alphas, L);
    const StateVector psi = initial_state(L);
    const OccupationDistribution dc = brute_force(uc, psi, n);
    const OccupationDistribution dm = brute_force(um, psi, n);
    for (long r = 0; r <= n; ++r) {
      CHECK(std::abs(dc.probs[r] - dm.probs[r]) <= 1e-12);
    }
  }
}

TEST_CASE("riesz walk operator is unitary on a large window") {
  const BandedUnitary u = build_for_model(ModelSpec::riesz(), 100);
  CHECK(u.unitarity_defect() < 1e-10);
}

TEST_CASE("cmv closure is unitary for random complex coefficients") {
  for (const long L : {1L, 2L, 5L, 17L}) {
    const BandedUnitary u = build_cmv(random_alphas(1000 + L), L);
    CHECK(u.unitarity_defect() < 1e-12);
  }
}

TEST_CASE("complex alpha-form coins match the cmv construction entrywise") {
  // vanishing odd coefficients, random complex even ones
  const VerblunskySequence base = random_alphas(4242);
  auto even_only = [&base](long j) -> cplx {
    return j % 2 == 0 ? base.alpha(j) : cplx{};
  };
  const VerblunskySequence alphas(even_only, "even-only");
  auto coins = [&alphas](long i) { return coin_from_alpha(alphas.alpha(2 * i)); };
  const long L = 7;
  const BandedUnitary uc = build_coined(coins, L);
  const BandedUnitary um = build_cmv(alphas, L);
  CHECK(max_entry_diff(uc, um, -2 * (L - 2), 2 * (L - 2) + 1) < 1e-14);
}

TEST_CASE("banded application agrees with a dense matrix product") {
  auto g = testutil::rng(9);
  const BandedUnitary u = build_cmv(random_alphas(55), 5);
  const FlatWindow& win = u.window();
  const std::size_t dim = win.size();
  for (int trial = 0; trial < 5; ++trial) {
    const StateVector v = testutil::random_state(win, g);
    const StateVector uv = u.apply(v);
    const StateVector av = u.apply_adjoint(v);
    for (long r = win.lo; r <= win.hi; ++r) {
      cplx dense{}, dense_adj{};
      for (long c = win.lo; c <= win.hi; ++c) {
        dense += u.entry(r, c) * v.at(c);
        dense_adj += std::conj(u.entry(c, r)) * v.at(c);
      }
      CHECK(std::abs(uv.at(r) - dense) < 1e-13);
      CHECK(std::abs(av.at(r) - dense_adj) < 1e-13);
    }
    (void)dim;
  }
}

TEST_CASE("apply preserves norms and adjoint inverts") {
  auto g = testutil::rng(6);
  const BandedUnitary u = build_for_model(ModelSpec::riesz(), 12);
  for (int trial = 0; trial < 20; ++trial) {
    const StateVector v = testutil::random_state(u.window(), g, 9);
    const StateVector uv = u.apply(v);
    CHECK(std::abs(uv.norm2() - v.norm2()) < 1e-12);
    const StateVector back = u.apply_adjoint(uv);
    for (long f = u.window().lo; f <= u.window().hi; ++f) {
      CHECK(std::abs(back.at(f) - v.at(f)) < 1e-12);
    }
  }
}

TEST_CASE("gauge transform") {
  const BandedUnitary u = build_for_model(ModelSpec::hadamard(), 6);
  SUBCASE("identity phases leave the operator unchanged") {
    const BandedUnitary v =
        gauge_transform(u, [](long) { return cplx(1.0, 0.0); });
    CHECK(max_entry_diff(u, v, u.window().lo, u.window().hi) == 0.0);
  }
  SUBCASE("non-unimodular phases are rejected") {
    CHECK_THROWS_AS(gauge_transform(u, [](long) { return cplx(0.5, 0.0); }),
                    invalid_coefficient);
  }
  SUBCASE("banded structure is preserved") {
    auto phase = [](long f) {
      std::mt19937_64 g(static_cast<std::uint64_t>(f + 1000));
      std::uniform_real_distribution<double> ph(0.0, 6.2831853);
      return std::polar(1.0, ph(g));
    };
    const BandedUnitary v = gauge_transform(u, phase);
    CHECK(v.unitarity_defect() < 1e-12);
    for (long r = v.window().lo; r <= v.window().hi; ++r) {
      for (long c = v.window().lo; c <= v.window().hi; ++c) {
        if (std::abs(r - c) > BandedUnitary::max_offset) {
          CHECK(v.entry(r, c) == cplx{});
        }
      }
    }
  }
}

TEST_CASE("hadamard walk is gauge equivalent to an alpha-form walk") {
  // D U_H D† with D = 1 on |i↑> and (-1)^i on |i↓> equals the coined walk
  // with alternating coefficients α_{2i} = -(-1)^i/√2.
  const long L = 12;
  const BandedUnitary uh = build_for_model(ModelSpec::hadamard(), L);
  auto phase = [](long f) -> cplx {
    if (spin_of(f) == Spin::up) return cplx(1.0, 0.0);
    return cplx(site_of(f) % 2 == 0 ? 1.0 : -1.0, 0.0);
  };
  const BandedUnitary gauged = gauge_transform(uh, phase);

  const double a = 1.0 / std::sqrt(2.0);
  auto coins = [a](long i) {
    return coin_from_alpha(cplx(i % 2 == 0 ? -a : a, 0.0));
  };
  const BandedUnitary ualt = build_coined(coins, L);
  CHECK(max_entry_diff(gauged, ualt, -2 * (L - 1), 2 * (L - 1) + 1) < 1e-14);

  // and the occupation statistics agree with the Hadamard walk's
  const long n = 10;
  const BandedUnitary uh_run = build_for_model(ModelSpec::hadamard(), n + 2);
  const BandedUnitary alt_run = build_coined(coins, n + 2);
  const StateVector psi = initial_state(n + 2);
  const OccupationDistribution dh = brute_force(uh_run, psi, n);
  const OccupationDistribution da = brute_force(alt_run, psi, n);
  for (long r = 0; r <= n; ++r) {
    CHECK(std::abs(dh.probs[r] - da.probs[r]) <= 1e-12);
  }
}

TEST_CASE("light cone: support stays within k+1 sites for every model") {
  for (const ModelSpec& model :
       {ModelSpec::hadamard(), ModelSpec::constant(mpq_class(3, 5)),
        ModelSpec::polynomial(), ModelSpec::riesz()}) {
    const long kmax = 40;
    const BandedUnitary u = build_for_model(model, kmax + 2);
    StateVector v = initial_state(kmax + 2).on_window(u.window());
    for (long k = 1; k <= kmax; ++k) {
      v = u.apply(v);
      double outside = 0.0;
      for (long f = u.window().lo; f <= u.window().hi; ++f) {
        if (std::abs(site_of(f)) > k + 1) outside += std::abs(v.at(f));
      }
      CHECK(outside == 0.0);
    }
  }
}

TEST_CASE("set_entry rejects entries off the band") {
  BandedUnitary u(FlatWindow::sites(3));
  CHECK_THROWS_AS(u.set_entry(0, 5, cplx(1.0, 0.0)), window_mismatch);
  CHECK_THROWS_AS(u.set_entry(0, 99, cplx(1.0, 0.0)), window_mismatch);
}

TEST_CASE("null inputs are rejected") {
  const BandedUnitary u = build_for_model(ModelSpec::hadamard(), 3);
  CHECK_THROWS_AS(gauge_transform(u, nullptr), invalid_coefficient);
  CHECK_THROWS_AS(build_coined(nullptr, 3), incomplete_model);
  CHECK_THROWS_AS(VerblunskySequence(nullptr), incomplete_model);
}

TEST_CASE("apply rejects mismatched windows") {
  const BandedUnitary u = build_for_model(ModelSpec::hadamard(), 5);
  const StateVector psi = initial_state(3);
  CHECK_THROWS_AS(u.apply(psi), window_mismatch);
  CHECK_THROWS_AS(u.apply_adjoint(psi), window_mismatch);
}

TEST_SUITE_END();
