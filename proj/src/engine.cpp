#include "occwalk/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <exception>
#include <numbers>
#include <thread>
#include <unistd.h>

#include "occwalk/kernels.hpp"

namespace occwalk {

namespace {

// Support bounds tracked in CMV index labels, where one step moves at most
// two indices; translating back to flat labels costs one index of slack on
// each side.  This covers both the coined and the CMV construction.
struct ConeTracker {
  long m_lo = 0, m_hi = 0;
  bool empty = true;

  void init(const cvec& v, const FlatWindow& win) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i] != cplx{}) {
        const long m = cmv_flat_alignment(win.flat_at(i));
        if (empty) {
          m_lo = m_hi = m;
          empty = false;
        } else {
          m_lo = std::min(m_lo, m);
          m_hi = std::max(m_hi, m);
        }
      }
    }
    if (empty) {
      m_lo = m_hi = cmv_flat_alignment(win.lo);
      empty = false;
    }
  }

  void grow() {
    m_lo -= 2;
    m_hi += 2;
  }

  IndexRange flat_range(const FlatWindow& win) const {
    const long flo = std::clamp(m_lo - 1, win.lo, win.hi);
    const long fhi = std::clamp(m_hi + 1, win.lo, win.hi);
    return {win.index(flo), win.index(fhi)};
  }
};

// Quadrant rectangles of the positive/negative split within an active range.
struct Quadrants {
  bool has_q = false, has_p = false;
  IndexRange q, p;
};

Quadrants split(const FlatWindow& win, IndexRange act) {
  Quadrants s;
  const std::size_t ps = win.positive_begin();
  if (act.lo < ps) {
    s.has_q = true;
    s.q = {act.lo, std::min(act.hi, ps - 1)};
  }
  if (act.hi >= ps) {
    s.has_p = true;
    s.p = {std::max(act.lo, ps), act.hi};
  }
  return s;
}

void copy_rect(DenseBlock& dst, const DenseBlock& src, IndexRange rows,
               IndexRange cols) {
  const std::size_t len = cols.size();
  for (std::size_t r = rows.lo; r <= rows.hi; ++r) {
    std::copy_n(src.row(r) + cols.lo, len, dst.row(r) + cols.lo);
  }
}

void scale_rect(DenseBlock& b, cplx a, IndexRange rows, IndexRange cols) {
  for (std::size_t r = rows.lo; r <= rows.hi; ++r) {
    kern::ops().scale(a, b.row(r) + cols.lo, cols.size());
  }
}

std::vector<std::size_t> boundary_indices(const FlatWindow& win) {
  std::vector<std::size_t> idx;
  const long site_lo = site_of(win.lo);
  const long site_hi = site_of(win.hi);
  for (long f = win.lo; f <= win.hi; ++f) {
    if (site_of(f) == site_lo || site_of(f) == site_hi) idx.push_back(win.index(f));
  }
  return idx;
}

void check_boundary(double mass, long step) {
  if (mass > boundary_mass_limit) {
    throw light_cone_violation(
        "window too small: boundary mass " + std::to_string(mass) +
        " at step " + std::to_string(step) +
        "; use a half-width of at least steps + 2");
  }
}

OccupationDistribution finalize(long n, std::vector<double> raw,
                                EngineDiagnostics diag) {
  diag.pre_clamp_sum = kern::pairwise_sum(raw.data(), raw.size());
  diag.min_prob = raw.empty() ? 0.0 : *std::min_element(raw.begin(), raw.end());
  for (double& p : raw) p = std::clamp(p, 0.0, 1.0);
  return OccupationDistribution{n, std::move(raw), diag};
}

void check_steps(long n) {
  if (n < 0) throw std::domain_error("step count must be >= 0");
}

// ρ = |ψ><ψ| on the active range.
void outer_product(const cvec& v, DenseBlock& out, IndexRange act) {
  for (std::size_t r = act.lo; r <= act.hi; ++r) {
    cplx* row = out.row(r);
    const cplx vr = v[r];
    for (std::size_t c = act.lo; c <= act.hi; ++c) {
      row[c] = vr * std::conj(v[c]);
    }
  }
}

}  // namespace

std::vector<double> cdf(const OccupationDistribution& d) {
  std::vector<double> out(d.probs.size());
  double acc = 0.0;
  for (std::size_t r = 0; r < d.probs.size(); ++r) {
    acc += d.probs[r];
    out[r] = std::min(acc, 1.0);
  }
  return out;
}

// ---------------------------------------------------------------------------
// brute force
// ---------------------------------------------------------------------------

namespace {

struct BruteState {
  const BandedUnitary* u;
  const FlatWindow* win;
  std::size_t ps;
  long n;
  std::vector<double>* probs;
  std::vector<std::size_t> boundary;
  double boundary_mass = 0.0;

  // Ranges grow by the bandwidth; no light-cone assumption, so this stays an
  // independent oracle for the other engines.
  IndexRange grow(IndexRange r) const {
    const std::size_t dim = u->dim();
    const std::size_t lo =
        r.lo >= static_cast<std::size_t>(BandedUnitary::max_offset)
            ? r.lo - BandedUnitary::max_offset
            : 0;
    const std::size_t hi = std::min(dim - 1, r.hi + BandedUnitary::max_offset);
    return {lo, hi};
  }

  double norm2(const cvec& v, IndexRange act) const {
    std::vector<double> sq(act.size());
    for (std::size_t i = act.lo; i <= act.hi; ++i) sq[i - act.lo] = std::norm(v[i]);
    return kern::pairwise_sum(sq.data(), sq.size());
  }

  void visit(const cvec& v, IndexRange act, long k, long count) {
    if (k == n) {
      (*probs)[static_cast<std::size_t>(count)] += norm2(v, act);
      return;
    }
    IndexRange next = grow(act);
    cvec y(v.size());
    u->apply_range(v.data(), y.data(), act, next);
    for (std::size_t b : boundary) {
      boundary_mass = std::max(boundary_mass, std::norm(y[b]));
    }
    // positive branch
    cvec pv(v.size());
    if (next.hi >= ps) {
      const std::size_t lo = std::max(next.lo, ps);
      std::copy_n(y.data() + lo, next.hi - lo + 1, pv.data() + lo);
      // y becomes the negative branch in place
      std::fill_n(y.data() + lo, next.hi - lo + 1, cplx{});
    }
    visit(pv, next, k + 1, count + 1);
    visit(y, next, k + 1, count);
  }
};

}  // namespace

OccupationDistribution brute_force(const BandedUnitary& u,
                                   const StateVector& psi, long n) {
  check_steps(n);
  if (n > brute_force_max_steps) {
    throw engine_guard("brute force limited to " +
                       std::to_string(brute_force_max_steps) +
                       " steps (2^n branches); use the density or transform "
                       "engine instead");
  }
  const StateVector v = psi.on_window(u.window());
  std::vector<double> probs(static_cast<std::size_t>(n) + 1, 0.0);

  ConeTracker cone;
  cone.init(v.data(), u.window());
  IndexRange act = cone.flat_range(u.window());

  BruteState st{&u,     &u.window(),          u.window().positive_begin(),
                n,      &probs,               boundary_indices(u.window())};
  st.visit(v.data(), act, 0, 0);
  check_boundary(st.boundary_mass, n);

  EngineDiagnostics diag;
  diag.boundary_mass = st.boundary_mass;
  return finalize(n, std::move(probs), diag);
}

// ---------------------------------------------------------------------------
// density ledger
// ---------------------------------------------------------------------------

DensityLedger::DensityLedger(const BandedUnitary& u, const StateVector& psi)
    : u_(&u),
      conj_tmp_(u.dim()),
      conj_out_(u.dim()),
      pp_prev_(u.dim()) {
  const StateVector v = psi.on_window(u.window());
  ConeTracker cone;
  cone.init(v.data(), u.window());
  cone_lo_ = cone.m_lo;
  cone_hi_ = cone.m_hi;
  blocks_.emplace_back(u.dim());
  outer_product(v.data(), blocks_[0], active());
}

IndexRange DensityLedger::active() const {
  ConeTracker cone;
  cone.m_lo = cone_lo_;
  cone.m_hi = cone_hi_;
  cone.empty = false;
  return cone.flat_range(u_->window());
}

void DensityLedger::step() {
  const FlatWindow& win = u_->window();
  const IndexRange in_act = active();
  cone_lo_ -= 2;
  cone_hi_ += 2;
  const IndexRange out_act = active();
  const Quadrants quad = split(win, out_act);

  pp_prev_.zero_rows(out_act, out_act);
  for (std::size_t j = 0; j < blocks_.size(); ++j) {
    u_->conjugate(blocks_[j], in_act, conj_tmp_, conj_out_, out_act);
    DenseBlock& b = blocks_[j];
    b.zero_rows(out_act, out_act);
    if (quad.has_q) copy_rect(b, conj_out_, quad.q, quad.q);
    if (quad.has_p) copy_rect(b, pp_prev_, quad.p, quad.p);
    pp_prev_.zero_rows(out_act, out_act);
    if (quad.has_p) copy_rect(pp_prev_, conj_out_, quad.p, quad.p);
  }
  blocks_.push_back(std::move(pp_prev_));
  pp_prev_ = DenseBlock(u_->dim());
  ++k_;
  check_boundary(boundary_mass(), k_);
}

std::vector<double> DensityLedger::probabilities() const {
  const IndexRange act = active();
  std::vector<double> p(blocks_.size());
  for (std::size_t j = 0; j < blocks_.size(); ++j) {
    p[j] = blocks_[j].trace_real(act);
  }
  return p;
}

double DensityLedger::trace_sum() const {
  const std::vector<double> p = probabilities();
  return kern::pairwise_sum(p.data(), p.size());
}

double DensityLedger::boundary_mass() const {
  double mass = 0.0;
  for (const std::size_t b : boundary_indices(u_->window())) {
    double s = 0.0;
    for (const DenseBlock& blk : blocks_) s += blk.at(b, b).real();
    mass = std::max(mass, std::abs(s));
  }
  return mass;
}

OccupationDistribution density_recursion(const BandedUnitary& u,
                                         const StateVector& psi, long n) {
  check_steps(n);
  // the ledger holds n+1 blocks plus scratch; refuse runs that cannot fit
  const double bytes = static_cast<double>(n + 4) *
                       static_cast<double>(u.dim()) *
                       static_cast<double>(u.dim()) * sizeof(cplx);
  double limit = 12e9;
  const long pages = sysconf(_SC_PHYS_PAGES);
  const long page_size = sysconf(_SC_PAGE_SIZE);
  if (pages > 0 && page_size > 0) {
    limit = std::min(limit, 0.8 * static_cast<double>(pages) *
                                static_cast<double>(page_size));
  }
  if (bytes > limit) {
    throw engine_guard(
        "density ledger for " + std::to_string(n) + " steps would need about " +
        std::to_string(bytes / 1e9) +
        " GB; use the transform engine instead");
  }
  DensityLedger ledger(u, psi);
  double boundary = 0.0;
  for (long k = 0; k < n; ++k) {
    ledger.step();
    boundary = std::max(boundary, ledger.boundary_mass());
  }
  EngineDiagnostics diag;
  diag.boundary_mass = boundary;
  return finalize(n, ledger.probabilities(), diag);
}

// ---------------------------------------------------------------------------
// transform over phases
// ---------------------------------------------------------------------------

namespace {

struct PhaseResult {
  cplx trace;
  double boundary_mass;
};

PhaseResult run_phase(const BandedUnitary& u, const cvec& v0, long n,
                      cplx phase_factor,
                      const std::vector<std::size_t>& boundary) {
  const FlatWindow& win = u.window();
  ConeTracker cone;
  cone.init(v0, win);
  IndexRange act = cone.flat_range(win);

  DenseBlock rho(u.dim()), tmp(u.dim()), mixed(u.dim());
  outer_product(v0, rho, act);

  double bmass = 0.0;
  for (long k = 0; k < n; ++k) {
    cone.grow();
    const IndexRange next = cone.flat_range(win);
    u.conjugate(rho, act, tmp, mixed, next);
    const Quadrants quad = split(win, next);
    rho.zero_rows(next, next);
    if (quad.has_q) copy_rect(rho, mixed, quad.q, quad.q);
    if (quad.has_p) {
      copy_rect(rho, mixed, quad.p, quad.p);
      scale_rect(rho, phase_factor, quad.p, quad.p);
    }
    act = next;
    double step_mass = 0.0;
    for (const std::size_t b : boundary) step_mass += std::abs(rho.at(b, b));
    bmass = std::max(bmass, step_mass);
  }

  // complex trace in fixed order
  cvec diag(act.size());
  for (std::size_t i = act.lo; i <= act.hi; ++i) diag[i - act.lo] = rho.at(i, i);
  return PhaseResult{kern::pairwise_sum(diag.data(), diag.size()), bmass};
}

}  // namespace

OccupationDistribution transform_recursion(const BandedUnitary& u,
                                           const StateVector& psi, long n,
                                           unsigned threads) {
  check_steps(n);
  const StateVector v = psi.on_window(u.window());
  const std::size_t phases = static_cast<std::size_t>(n) + 1;
  const std::vector<std::size_t> boundary = boundary_indices(u.window());

  // roots of unity: w[t] = e^{2πi t/(n+1)}
  std::vector<cplx> roots(phases);
  for (std::size_t t = 0; t < phases; ++t) {
    roots[t] = std::polar(1.0, 2.0 * std::numbers::pi *
                                   static_cast<double>(t) /
                                   static_cast<double>(phases));
  }

  // the p_r are real, so t_{phases-m} = conj(t_m): only the first half of
  // the phases needs propagating
  const std::size_t computed = phases / 2 + 1;
  std::vector<PhaseResult> results(phases);
  unsigned nthreads = threads == 0 ? std::thread::hardware_concurrency() : threads;
  nthreads = std::max(1u, std::min<unsigned>(nthreads, computed));

  auto work = [&](std::size_t begin, std::size_t end,
                  std::exception_ptr& err) noexcept {
    try {
      for (std::size_t m = begin; m < end; ++m) {
        results[m] = run_phase(u, v.data(), n, roots[m], boundary);
      }
    } catch (...) {
      err = std::current_exception();
    }
  };

  if (nthreads <= 1) {
    std::exception_ptr err;
    work(0, computed, err);
    if (err) std::rethrow_exception(err);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errs(nthreads);
    for (unsigned t = 0; t < nthreads; ++t) {
      const std::size_t begin = computed * t / nthreads;
      const std::size_t end = computed * (t + 1) / nthreads;
      pool.emplace_back(work, begin, end, std::ref(errs[t]));
    }
    for (auto& th : pool) th.join();
    for (auto& e : errs) {
      if (e) std::rethrow_exception(e);
    }
  }
  for (std::size_t m = computed; m < phases; ++m) {
    results[m].trace = std::conj(results[phases - m].trace);
    results[m].boundary_mass = results[phases - m].boundary_mass;
  }

  double boundary_mass = 0.0;
  for (const PhaseResult& r : results) {
    boundary_mass = std::max(boundary_mass, r.boundary_mass);
  }
  check_boundary(boundary_mass, n);

  // p_r = (1/(n+1)) Σ_m t_m e^{-2πi m r/(n+1)}, fixed ascending order
  std::vector<double> probs(phases);
  double max_imag = 0.0;
  for (std::size_t r = 0; r < phases; ++r) {
    cplx acc{};
    for (std::size_t m = 0; m < phases; ++m) {
      acc += results[m].trace * std::conj(roots[(m * r) % phases]);
    }
    acc /= static_cast<double>(phases);
    max_imag = std::max(max_imag, std::abs(acc.imag()));
    probs[r] = acc.real();
  }

  EngineDiagnostics diag;
  diag.boundary_mass = boundary_mass;
  diag.max_imag = max_imag;
  return finalize(n, std::move(probs), diag);
}

}  // namespace occwalk
