#include "occwalk/classical.hpp"

#include <cmath>
#include <exception>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "occwalk/common.hpp"

namespace occwalk::classical {

Rational u(long k) {
  if (k < 0 || k % 2 != 0) {
    throw std::domain_error("u_k is defined for even k >= 0");
  }
  mpz_class binom;
  mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(k),
               static_cast<unsigned long>(k / 2));
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), 2, static_cast<unsigned long>(k));
  Rational out(binom, den);
  out.canonicalize();
  return out;
}

Rational chung_feller(long n, long r) {
  if (n < 0 || r < 0 || r > n) {
    throw std::domain_error("need 0 <= r <= n");
  }
  return u(2 * r) * u(2 * (n - r));
}

Rational odd_step(long n, long r, TargetParity target) {
  if (n < 0) throw std::domain_error("need n >= 0");
  Rational frac;
  if (target == TargetParity::even) {
    if (r < 0 || r > n) throw std::domain_error("even target needs 0 <= r <= n");
    frac = Rational(n - r + 1, n + 1);
  } else {
    if (r < 1 || r > n + 1) {
      throw std::domain_error("odd target needs 1 <= r <= n+1");
    }
    frac = Rational(r, n + 1);
  }
  frac.canonicalize();
  return u(2 * r) * u(2 * n + 2 - 2 * r) * frac;
}

std::vector<Rational> exact_distribution(long n) {
  if (n < 0) throw std::domain_error("need n >= 0");
  std::vector<Rational> out(static_cast<std::size_t>(n) + 1, Rational(0));
  if (n % 2 == 0) {
    const long m = n / 2;
    for (long r = 0; r <= m; ++r) out[static_cast<std::size_t>(2 * r)] = chung_feller(m, r);
  } else {
    const long m = (n - 1) / 2;
    for (long r = 0; r <= m; ++r) {
      out[static_cast<std::size_t>(2 * r)] = odd_step(m, r, TargetParity::even);
    }
    for (long r = 1; r <= m + 1; ++r) {
      out[static_cast<std::size_t>(2 * r - 1)] = odd_step(m, r, TargetParity::odd);
    }
  }
  return out;
}

namespace {

int positive_count(std::uint64_t path_bits, int n) {
  int s = 0;
  int count = 0;
  for (int k = 0; k < n; ++k) {
    const int prev = s;
    s += (path_bits >> k) & 1 ? 1 : -1;
    if (s > 0 || (s == 0 && prev > 0)) ++count;
  }
  return count;
}

}  // namespace

std::vector<Rational> enumerate_paths(int n) {
  if (n < 0) throw std::domain_error("need n >= 0");
  if (n > enumerate_max_tosses) {
    throw engine_guard("path enumeration limited to " +
                       std::to_string(enumerate_max_tosses) + " tosses");
  }
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(n) + 1, 0);
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t path = 0; path < total; ++path) {
    ++counts[static_cast<std::size_t>(positive_count(path, n))];
  }
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), 2, static_cast<unsigned long>(n));
  std::vector<Rational> out;
  out.reserve(counts.size());
  for (const std::uint64_t c : counts) {
    Rational q(mpz_class(static_cast<unsigned long>(c)), den);
    q.canonicalize();
    out.push_back(q);
  }
  return out;
}

namespace {

constexpr std::uint64_t golden = 0x9E3779B97F4A7C15ull;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// word q of trial t, independent of chunking
std::uint64_t trial_word(std::uint64_t seed, std::uint64_t t,
                         std::uint64_t words_per_trial, std::uint64_t q) {
  return mix64(seed + golden * (t * words_per_trial + q + 1));
}

}  // namespace

std::vector<double> MonteCarloResult::frequencies() const {
  std::vector<double> f(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    f[i] = static_cast<double>(counts[i]) / static_cast<double>(trials);
  }
  return f;
}

MonteCarloResult monte_carlo(int n, std::uint64_t trials, std::uint64_t seed,
                             unsigned threads) {
  if (n < 0) throw std::domain_error("need n >= 0");
  if (trials < 1) throw std::domain_error("need at least one trial");
  const std::uint64_t words = (static_cast<std::uint64_t>(n) + 63) / 64;

  unsigned nthreads = threads == 0 ? std::thread::hardware_concurrency() : threads;
  nthreads = std::max<unsigned>(1, nthreads);
  if (trials < nthreads) nthreads = static_cast<unsigned>(trials);

  std::vector<std::vector<std::uint64_t>> partial(
      nthreads, std::vector<std::uint64_t>(static_cast<std::size_t>(n) + 1, 0));

  auto work = [&](unsigned tid, std::uint64_t begin, std::uint64_t end) {
    auto& counts = partial[tid];
    for (std::uint64_t t = begin; t < end; ++t) {
      int s = 0;
      int count = 0;
      std::uint64_t word = 0;
      for (int k = 0; k < n; ++k) {
        if (k % 64 == 0) {
          word = trial_word(seed, t, words, static_cast<std::uint64_t>(k) / 64);
        }
        const int prev = s;
        s += (word >> (k % 64)) & 1 ? 1 : -1;
        if (s > 0 || (s == 0 && prev > 0)) ++count;
      }
      ++counts[static_cast<std::size_t>(count)];
    }
  };

  if (nthreads == 1) {
    work(0, 0, trials);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < nthreads; ++t) {
      pool.emplace_back(work, t, trials * t / nthreads,
                        trials * (t + 1) / nthreads);
    }
    for (auto& th : pool) th.join();
  }

  MonteCarloResult out;
  out.counts.assign(static_cast<std::size_t>(n) + 1, 0);
  for (const auto& c : partial) {
    for (std::size_t i = 0; i < c.size(); ++i) out.counts[i] += c[i];
  }
  out.trials = trials;
  out.seed = seed;
  return out;
}

double arcsine_cdf(double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::domain_error("arcsine cdf defined on [0, 1]");
  }
  return 2.0 / std::numbers::pi * std::asin(std::sqrt(x));
}

double legendre_p(int n, double x) {
  if (n < 0) throw std::domain_error("need n >= 0");
  if (n == 0) return 1.0;
  double pm = 1.0;
  double p = x;
  for (int k = 1; k < n; ++k) {
    const double next =
        ((2.0 * k + 1.0) * x * p - static_cast<double>(k) * pm) / (k + 1.0);
    pm = p;
    p = next;
  }
  return p;
}

double legendre_identity_residual(int n, double q) {
  if (q <= 0.0) throw std::domain_error("need q > 0");
  double lhs = 0.0;
  for (long k = 0; k <= n; ++k) {
    const double coeff = Rational(u(2 * k) * u(2 * (n - k))).get_d();
    lhs += coeff * std::pow(q, 2.0 * static_cast<double>(k));
  }
  const double rhs =
      legendre_p(n, (q + 1.0 / q) / 2.0) * std::pow(q, static_cast<double>(n));
  const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
  return std::abs(lhs - rhs) / scale;
}

}  // namespace occwalk::classical
