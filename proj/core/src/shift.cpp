#include "greenlab/shift.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "greenlab/error.hpp"
#include "greenlab/rng.hpp"

namespace greenlab {

namespace {

Rational frac(long num, long den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

std::size_t ipow(int d, int k) {
  std::size_t p = 1;
  for (int i = 0; i < k; ++i) p *= static_cast<std::size_t>(d);
  return p;
}

void require_same_d(const CylinderFunction& a, const CylinderFunction& b) {
  if (a.d() != b.d()) throw Error(ErrorCode::InvalidParams, "cylinder functions over different alphabets");
}

constexpr mpfr_prec_t kBits = 256;

class Real {
 public:
  Real() { mpfr_init2(v_, kBits); }
  ~Real() { mpfr_clear(v_); }
  Real(const Real&) = delete;
  Real& operator=(const Real&) = delete;

  mpfr_ptr get() noexcept { return v_; }
  mpfr_srcptr get() const noexcept { return v_; }

 private:
  mpfr_t v_;
};

// Enclosure [lo, hi] of a real number.
struct Interval {
  Real lo;
  Real hi;
};

void set_q(Interval& x, const Rational& q) {
  mpfr_set_q(x.lo.get(), q.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(x.hi.get(), q.get_mpq_t(), MPFR_RNDU);
}

// coef * exp(arg) for coef >= 0, both exact rationals.
void add_exp_term(Interval& acc, const Rational& coef, const Rational& arg) {
  Real e, c;
  for (int side = 0; side < 2; ++side) {
    const mpfr_rnd_t r = side == 0 ? MPFR_RNDD : MPFR_RNDU;
    mpfr_ptr out = side == 0 ? acc.lo.get() : acc.hi.get();
    mpfr_set_q(e.get(), arg.get_mpq_t(), r);
    mpfr_exp(e.get(), e.get(), r);
    mpfr_set_q(c.get(), coef.get_mpq_t(), r);
    mpfr_mul(e.get(), e.get(), c.get(), r);
    mpfr_add(out, out, e.get(), r);
  }
}

void zero(Interval& x) {
  mpfr_set_zero(x.lo.get(), 1);
  mpfr_set_zero(x.hi.get(), 1);
}

Verdict compare(const Interval& lhs, const Interval& rhs) {
  if (mpfr_lessequal_p(lhs.hi.get(), rhs.lo.get())) return Verdict::proven;
  if (mpfr_greater_p(lhs.lo.get(), rhs.hi.get())) return Verdict::violated;
  return Verdict::tight;
}

Verdict worse(Verdict a, Verdict b) { return static_cast<int>(a) > static_cast<int>(b) ? a : b; }

Verdict compare_exact(const Rational& lhs, const Rational& rhs) {
  if (lhs < rhs) return Verdict::proven;
  if (lhs == rhs) return Verdict::tight;
  return Verdict::violated;
}

}  // namespace

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::proven: return "proven";
    case Verdict::tight: return "tight";
    case Verdict::violated: return "violated";
  }
  return "unknown";
}

// ---- CylinderFunction ----------------------------------------------------

CylinderFunction::CylinderFunction(int d, int depth, std::vector<Rational> table)
    : d_(d), depth_(depth), table_(std::move(table)) {
  if (d < 2) throw Error(ErrorCode::InvalidParams, "shift needs d >= 2");
  if (depth < 0) throw Error(ErrorCode::InvalidParams, "depth must be >= 0");
  std::size_t n = 1;
  for (int i = 0; i < depth; ++i) {
    n *= static_cast<std::size_t>(d);
    if (n > 4 * kEnumerationBudget) {
      throw Error(ErrorCode::DepthUnsupported, "cylinder table exceeds the enumeration budget");
    }
  }
  if (table_.size() != n) {
    throw Error(ErrorCode::InvalidParams, "table length " + std::to_string(table_.size()) +
                                              " != d^depth = " + std::to_string(n));
  }
}

CylinderFunction CylinderFunction::constant(int d, const Rational& c) {
  return CylinderFunction(d, 0, {c});
}

CylinderFunction CylinderFunction::indicator(int d, const std::vector<int>& prefix) {
  const int m = static_cast<int>(prefix.size());
  std::vector<Rational> t(ipow(d, m), Rational(0));
  std::size_t idx = 0;
  for (int s : prefix) {
    if (s < 0 || s >= d) throw Error(ErrorCode::InvalidParams, "symbol out of range");
    idx = idx * static_cast<std::size_t>(d) + static_cast<std::size_t>(s);
  }
  t[idx] = 1;
  return CylinderFunction(d, m, std::move(t));
}

const Rational& CylinderFunction::value(std::span<const int> word) const {
  if (static_cast<int>(word.size()) < depth_) throw Error(ErrorCode::InvalidParams, "word too short");
  std::size_t idx = 0;
  for (int i = 0; i < depth_; ++i) idx = idx * static_cast<std::size_t>(d_) + static_cast<std::size_t>(word[static_cast<std::size_t>(i)]);
  return table_[idx];
}

Rational CylinderFunction::mean() const {
  Rational s = 0;
  for (const auto& v : table_) s += v;
  s /= Rational(static_cast<long>(table_.size()));
  return s;
}

CylinderFunction CylinderFunction::extend(int depth) const {
  if (depth < depth_) throw Error(ErrorCode::InvalidParams, "extend cannot lower the depth");
  const std::size_t k = ipow(d_, depth - depth_);
  std::vector<Rational> t(table_.size() * k);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = table_[i / k];
  return CylinderFunction(d_, depth, std::move(t));
}

CylinderFunction CylinderFunction::reduced() const {
  for (int k = 0; k < depth_; ++k) {
    const std::size_t block = ipow(d_, depth_ - k);
    bool ok = true;
    for (std::size_t i = 0; i < table_.size() && ok; ++i) ok = table_[i] == table_[(i / block) * block];
    if (ok) {
      std::vector<Rational> t(ipow(d_, k));
      for (std::size_t j = 0; j < t.size(); ++j) t[j] = table_[j * block];
      return CylinderFunction(d_, k, std::move(t));
    }
  }
  return *this;
}

namespace {

template <class Op>
CylinderFunction pointwise(const CylinderFunction& a, const CylinderFunction& b, Op op) {
  require_same_d(a, b);
  const int m = std::max(a.depth(), b.depth());
  const CylinderFunction x = a.extend(m), y = b.extend(m);
  std::vector<Rational> t(x.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = op(x[i], y[i]);
  return CylinderFunction(a.d(), m, std::move(t));
}

}  // namespace

CylinderFunction CylinderFunction::operator+(const CylinderFunction& o) const {
  return pointwise(*this, o, [](const Rational& x, const Rational& y) { return Rational(x + y); });
}
CylinderFunction CylinderFunction::operator-(const CylinderFunction& o) const {
  return pointwise(*this, o, [](const Rational& x, const Rational& y) { return Rational(x - y); });
}
CylinderFunction CylinderFunction::operator*(const CylinderFunction& o) const {
  return pointwise(*this, o, [](const Rational& x, const Rational& y) { return Rational(x * y); });
}

CylinderFunction CylinderFunction::scaled(const Rational& c) const {
  std::vector<Rational> t(table_);
  for (auto& v : t) v *= c;
  return CylinderFunction(d_, depth_, std::move(t));
}

CylinderFunction CylinderFunction::shifted(const Rational& c) const {
  std::vector<Rational> t(table_);
  for (auto& v : t) v += c;
  return CylinderFunction(d_, depth_, std::move(t));
}

bool CylinderFunction::same_function(const CylinderFunction& o) const {
  if (d_ != o.d_) return false;
  const int m = std::max(depth_, o.depth_);
  return extend(m).table_ == o.extend(m).table_;
}

bool CylinderFunction::is_zero() const {
  return std::all_of(table_.begin(), table_.end(), [](const Rational& v) { return v == 0; });
}

// ---- exact operators -------------------------------------------------------

CylinderFunction shift_transfer(const CylinderFunction& c) {
  if (c.depth() == 0) return c;
  const int d = c.d();
  const std::size_t rest = ipow(d, c.depth() - 1);
  std::vector<Rational> t(rest, Rational(0));
  for (std::size_t j = 0; j < rest; ++j) {
    for (int a = 0; a < d; ++a) t[j] += c[static_cast<std::size_t>(a) * rest + j];
    t[j] /= d;
  }
  return CylinderFunction(d, c.depth() - 1, std::move(t));
}

CylinderFunction shift_transfer(const CylinderFunction& c, int n) {
  if (n < 0) throw Error(ErrorCode::InvalidParams, "n must be >= 0");
  CylinderFunction out = c;
  for (int i = 0; i < n && out.depth() > 0; ++i) out = shift_transfer(out);
  return out;
}

CylinderFunction compose_shift(const CylinderFunction& c, int n) {
  if (n < 0) throw Error(ErrorCode::InvalidParams, "n must be >= 0");
  const std::size_t dm = c.size();
  std::vector<Rational> t(dm * ipow(c.d(), n));
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = c[i % dm];
  return CylinderFunction(c.d(), c.depth() + n, std::move(t));
}

Rational inner(const CylinderFunction& a, const CylinderFunction& b) { return (a * b).mean(); }

Rational l2_norm_sq(const CylinderFunction& a) { return inner(a, a); }

Rational shift_correlation(const CylinderFunction& phi, const CylinderFunction& psi, int n) {
  require_same_d(phi, psi);
  return inner(phi, compose_shift(psi, n)) - phi.mean() * psi.mean();
}

Rational shift_correlation_adjoint(const CylinderFunction& phi, const CylinderFunction& psi,
                                   int n) {
  require_same_d(phi, psi);
  return inner(shift_transfer(phi, n), psi) - phi.mean() * psi.mean();
}

Rational shift_multi_correlation(const CylinderFunction& psi0, const CylinderFunction& psi1,
                                 const CylinderFunction& psi2, int n1, int n2) {
  if (n1 < 0 || n2 < n1) throw Error(ErrorCode::InvalidParams, "need 0 <= n1 <= n2");
  const CylinderFunction prod = psi0 * compose_shift(psi1, n1) * compose_shift(psi2, n2);
  return prod.mean() - psi0.mean() * psi1.mean() * psi2.mean();
}

CylinderFunction shift_conditional(const CylinderFunction& psi, int n) {
  if (n < 0) throw Error(ErrorCode::InvalidParams, "n must be >= 0");
  if (n == 0) return psi;
  const int m = psi.depth();
  if (n >= m) return CylinderFunction::constant(psi.d(), psi.mean());
  const std::size_t fiber = ipow(psi.d(), n);
  const std::size_t rest = ipow(psi.d(), m - n);
  std::vector<Rational> t(psi.size());
  for (std::size_t idx = 0; idx < t.size(); ++idx) {
    Rational s = 0;
    for (std::size_t p = 0; p < fiber; ++p) s += psi[p * rest + idx % rest];
    s /= Rational(static_cast<long>(fiber));
    t[idx] = s;
  }
  return CylinderFunction(psi.d(), m, std::move(t));
}

Rational shift_ldt_exact(const CylinderFunction& psi, int n, const Rational& eps) {
  if (n < 1) throw Error(ErrorCode::InvalidParams, "n must be >= 1");
  if (eps < 0) throw Error(ErrorCode::InvalidParams, "epsilon must be >= 0");
  const Rational mean = psi.mean();
  const int d = psi.d();
  const int m = psi.depth();
  if (m == 0) return 0;
  if (m == 1) {
    std::map<Rational, Rational> dist{{Rational(0), Rational(1)}};
    const Rational p = frac(1, d);
    for (int step = 0; step < n; ++step) {
      std::map<Rational, Rational> next;
      for (const auto& [s, w] : dist) {
        for (int a = 0; a < d; ++a) next[s + psi[static_cast<std::size_t>(a)]] += w * p;
      }
      dist.swap(next);
    }
    Rational tail = 0;
    for (const auto& [s, w] : dist) {
      Rational dev = s / n - mean;
      if (abs(dev) > eps) tail += w;
    }
    return tail;
  }
  const int len = n + m - 1;
  std::size_t words = 1;
  for (int i = 0; i < len; ++i) {
    words *= static_cast<std::size_t>(d);
    if (words > kEnumerationBudget) {
      throw Error(ErrorCode::DepthUnsupported,
                  "d^(n + depth - 1) exceeds the 2^20 enumeration budget");
    }
  }
  // Integer arithmetic over the common denominator.
  mpz_class L = 1;
  for (const auto& v : psi.table()) mpz_lcm(L.get_mpz_t(), L.get_mpz_t(), v.get_den_mpz_t());
  std::vector<std::int64_t> T(psi.size());
  mpz_class bound = 0;
  for (std::size_t i = 0; i < T.size(); ++i) {
    const mpz_class x = psi[i].get_num() * (L / psi[i].get_den());
    if (abs(x) > bound) bound = abs(x);
    if (!x.fits_slong_p()) throw Error(ErrorCode::DepthUnsupported, "table values too large");
    T[i] = x.get_si();
  }
  if (bound * n > mpz_class("4611686018427387904")) {
    throw Error(ErrorCode::DepthUnsupported, "table values too large");
  }
  const Rational centre = Rational(L) * n * mean;
  const Rational width = Rational(L) * n * eps;
  // X > hi  <=>  X >= floor(hi) + 1;  X < lo  <=>  X <= ceil(lo) - 1.
  mpz_class hi_z, lo_z;
  const Rational hi = centre + width, lo = centre - width;
  mpz_fdiv_q(hi_z.get_mpz_t(), hi.get_num_mpz_t(), hi.get_den_mpz_t());
  mpz_cdiv_q(lo_z.get_mpz_t(), lo.get_num_mpz_t(), lo.get_den_mpz_t());
  const std::int64_t above = hi_z.get_si() + 1;
  const std::int64_t below = lo_z.get_si() - 1;
  std::vector<std::size_t> pw(static_cast<std::size_t>(len + 1), 1);
  for (int i = 1; i <= len; ++i) pw[static_cast<std::size_t>(i)] = pw[static_cast<std::size_t>(i - 1)] * static_cast<std::size_t>(d);
  const std::size_t dm = psi.size();
  std::uint64_t count = 0;
  for (std::size_t w = 0; w < words; ++w) {
    std::int64_t X = 0;
    for (int j = 0; j < n; ++j) X += T[(w / pw[static_cast<std::size_t>(n - 1 - j)]) % dm];
    count += (X >= above || X <= below) ? 1u : 0u;
  }
  Rational tail(mpz_class(static_cast<unsigned long>(count)), mpz_class(static_cast<unsigned long>(words)));
  tail.canonicalize();
  return tail;
}

// ---- Bennett ---------------------------------------------------------------

BennettReport bennett_check(const Rational& b, std::span<const Rational> nu_grid,
                            std::span<const Rational> lambda_grid, int u_steps) {
  if (b <= 0) throw Error(ErrorCode::InvalidParams, "b must be > 0");
  if (u_steps < 1) throw Error(ErrorCode::InvalidParams, "u_steps must be >= 1");
  BennettReport rep;
  rep.b = b;
  for (const Rational& nu : nu_grid) {
    if (nu <= 0 || nu >= 1) throw Error(ErrorCode::InvalidParams, "nu must lie in (0, 1)");
    const Rational one_minus = 1 - nu;
    const Rational s_minus = std::max(Rational(1), Rational(one_minus / nu));
    const Rational s_plus = std::max(Rational(1), Rational(nu / one_minus));
    for (const Rational& lambda : lambda_grid) {
      if (lambda < 0) throw Error(ErrorCode::InvalidParams, "lambda must be >= 0");
      BennettCase cs;
      cs.nu = nu;
      cs.lambda = lambda;
      Interval rhs;
      zero(rhs);
      add_exp_term(rhs, nu, -s_minus * lambda * b);
      add_exp_term(rhs, one_minus, s_plus * lambda * b);
      for (int k = 0; k <= u_steps; ++k) {
        const Rational u = b * frac(2 * k - u_steps, u_steps);
        const Rational v = -nu * u / one_minus;
        if (abs(v) > b) continue;
        Interval lhs;
        zero(lhs);
        add_exp_term(lhs, nu, lambda * u);
        add_exp_term(lhs, one_minus, lambda * v);
        cs.worst = worse(cs.worst, compare(lhs, rhs));
        ++cs.psi_checked;
        const Verdict v_case = compare(lhs, rhs);
        if (v_case == Verdict::proven) ++rep.proven;
        else if (v_case == Verdict::tight) ++rep.tight;
        else ++rep.violated;
      }
      const Rational u0 = -s_minus * b, v0 = s_plus * b;
      cs.extremal_centered = nu * u0 + one_minus * v0 == 0;
      Interval ext;
      zero(ext);
      add_exp_term(ext, nu, lambda * u0);
      add_exp_term(ext, one_minus, lambda * v0);
      cs.extremal = compare(ext, rhs);
      if (lambda == 0) {
        // Both sides are nu + (1 - nu) = 1 exactly.
        cs.lambda_zero_exact = nu + one_minus == 1;
      }
      rep.cases.push_back(std::move(cs));
    }
  }
  rep.ok = rep.violated == 0 && !rep.cases.empty();
  for (const auto& cs : rep.cases) {
    rep.ok = rep.ok && cs.extremal_centered && cs.extremal != Verdict::violated &&
             (cs.lambda != 0 || cs.lambda_zero_exact);
  }
  return rep;
}

// ---- fiber sets --------------------------------------------------------------

FiberSetReport fiber_set_check(int d) {
  if (d < 2) throw Error(ErrorCode::InvalidParams, "d must be >= 2");
  FiberSetReport rep;
  rep.d = d;
  rep.ok = true;
  const int depth = 3;
  const std::size_t words = ipow(d, depth);
  const std::size_t tails = ipow(d, depth - 1);  // (x2, x3)
  const Rational target = frac(d - 1, d);
  auto check = [&](const std::vector<char>& in_b) {
    long mb = 0, mab = 0;
    for (std::size_t w = 0; w < words; ++w) {
      if (!in_b[w % tails]) continue;
      ++mb;
      if (w / tails != 0) ++mab;
    }
    const Rational lhs = frac(mab, static_cast<long>(words));
    const Rational rhs = target * frac(mb, static_cast<long>(words));
    rep.ok = rep.ok && lhs == rhs;
    ++rep.sets_checked;
  };
  // Cylinders {x2 .. x_{1+k} = w}, k = 0, 1, 2.
  for (int k = 0; k <= depth - 1; ++k) {
    const std::size_t nw = ipow(d, k), block = ipow(d, depth - 1 - k);
    for (std::size_t w = 0; w < nw; ++w) {
      std::vector<char> in_b(tails, 0);
      for (std::size_t t = 0; t < tails; ++t) in_b[t] = t / block == w;
      check(in_b);
    }
  }
  // Every union of (x2, x3)-cylinders when there are few enough.
  if (tails <= 16) {
    for (std::uint32_t mask = 1; mask < (1u << tails); ++mask) {
      std::vector<char> in_b(tails, 0);
      for (std::size_t t = 0; t < tails; ++t) in_b[t] = (mask >> t) & 1u;
      check(in_b);
    }
  }
  return rep;
}

// ---- exponential series ------------------------------------------------------

namespace {

// Enclosure of <e^{xi_m}> with xi_m = sum_{n>=m} w_{n-m} log E_n, w_k = (1-theta) theta^k.
void series_moment(const std::vector<std::vector<Rational>>& E, const Rational& theta, int m,
                   Interval& out) {
  const int K = static_cast<int>(E.size());
  zero(out);
  Real lg, w, s, e;
  for (int cell = 0; cell < kExpSeriesCells; ++cell) {
    for (int side = 0; side < 2; ++side) {
      const mpfr_rnd_t r = side == 0 ? MPFR_RNDD : MPFR_RNDU;
      mpfr_set_zero(s.get(), 1);
      Rational wk = 1 - theta;
      for (int n = m; n < K; ++n) {
        mpfr_set_q(lg.get(), E[static_cast<std::size_t>(n)][static_cast<std::size_t>(cell)].get_mpq_t(), r);
        mpfr_log(lg.get(), lg.get(), r);
        mpfr_set_q(w.get(), wk.get_mpq_t(), r);
        mpfr_mul(lg.get(), lg.get(), w.get(), r);
        mpfr_add(s.get(), s.get(), lg.get(), r);
        wk *= theta;
      }
      mpfr_exp(e.get(), s.get(), r);
      mpfr_ptr acc = side == 0 ? out.lo.get() : out.hi.get();
      mpfr_add(acc, acc, e.get(), r);
    }
  }
  mpfr_div_ui(out.lo.get(), out.lo.get(), kExpSeriesCells, MPFR_RNDD);
  mpfr_div_ui(out.hi.get(), out.hi.get(), kExpSeriesCells, MPFR_RNDU);
}

// c^(1-theta) * M^theta with M given as an enclosure.
void holder_rhs(const Rational& c, const Rational& theta, const Interval& M, Interval& out) {
  Real lc, lm, t;
  for (int side = 0; side < 2; ++side) {
    const mpfr_rnd_t r = side == 0 ? MPFR_RNDD : MPFR_RNDU;
    mpfr_set_q(lc.get(), c.get_mpq_t(), r);
    mpfr_log(lc.get(), lc.get(), r);
    mpfr_set_q(t.get(), Rational(1 - theta).get_mpq_t(), r);
    mpfr_mul(lc.get(), lc.get(), t.get(), r);
    mpfr_log(lm.get(), side == 0 ? M.lo.get() : M.hi.get(), r);
    mpfr_set_q(t.get(), theta.get_mpq_t(), r);
    mpfr_mul(lm.get(), lm.get(), t.get(), r);
    mpfr_ptr dst = side == 0 ? out.lo.get() : out.hi.get();
    mpfr_add(dst, lc.get(), lm.get(), r);
    mpfr_exp(dst, dst, r);
  }
}

}  // namespace

ExpSeriesReport exp_series_check(const Rational& c, const Rational& theta,
                                 const std::vector<std::vector<Rational>>& E) {
  if (c < 1) throw Error(ErrorCode::InvalidParams, "c must be >= 1");
  if (theta <= 0 || theta >= 1) throw Error(ErrorCode::InvalidParams, "theta must lie in (0, 1)");
  for (const auto& row : E) {
    if (row.size() != kExpSeriesCells) throw Error(ErrorCode::InvalidParams, "E rows need 16 cells");
    for (const auto& v : row) {
      if (v < 1) throw Error(ErrorCode::InvalidParams, "e^eta must be >= 1 (eta >= 0)");
    }
  }
  ExpSeriesReport rep;
  rep.c = c;
  rep.theta = theta;
  rep.terms = static_cast<int>(E.size());
  for (const auto& row : E) {
    Rational mean = 0;
    for (const auto& v : row) mean += v;
    mean /= kExpSeriesCells;
    rep.hypothesis = worse(rep.hypothesis, compare_exact(mean, c));
  }
  const int K = rep.terms;
  std::vector<Interval> M(static_cast<std::size_t>(K + 1));
  for (int m = K; m >= 0; --m) series_moment(E, theta, m, M[static_cast<std::size_t>(m)]);
  rep.moment.resize(static_cast<std::size_t>(K + 1));
  for (int m = 0; m <= K; ++m) {
    const auto& x = M[static_cast<std::size_t>(m)];
    rep.moment[static_cast<std::size_t>(m)] =
        0.5 * (mpfr_get_d(x.lo.get(), MPFR_RNDN) + mpfr_get_d(x.hi.get(), MPFR_RNDN));
  }
  for (int m = 0; m < K; ++m) {
    Interval rhs;
    holder_rhs(c, theta, M[static_cast<std::size_t>(m + 1)], rhs);
    rep.chain.push_back(compare(M[static_cast<std::size_t>(m)], rhs));
  }
  Interval cc;
  set_q(cc, c);
  rep.final = compare(M[0], cc);
  rep.ok = rep.hypothesis != Verdict::violated && rep.final != Verdict::violated &&
           std::none_of(rep.chain.begin(), rep.chain.end(),
                        [](Verdict v) { return v == Verdict::violated; });
  return rep;
}

std::vector<std::vector<Rational>> exp_series_family(const Rational& c, int depth,
                                                     std::uint64_t seed) {
  if (depth < 1) throw Error(ErrorCode::InvalidParams, "series depth must be >= 1");
  std::vector<std::vector<Rational>> E(static_cast<std::size_t>(depth));
  for (int n = 0; n < depth; ++n) {
    Stream rng(seed, Purpose::oracle_tables, static_cast<std::uint64_t>(n));
    std::vector<Rational> r(kExpSeriesCells);
    Rational total = 0;
    for (auto& x : r) {
      x = frac(rng.below(9), 8);
      total += x;
    }
    if (total == 0) {
      r[0] = 1;
      total = 1;
    }
    const Rational mean_r = total / kExpSeriesCells;
    const Rational s = frac(1 + rng.below(8), 8);
    auto& row = E[static_cast<std::size_t>(n)];
    for (const auto& x : r) row.push_back(1 + (c - 1) * s * x / mean_r);
  }
  return E;
}

ExpSeriesReport exp_series_check(const Rational& c, const Rational& theta, int depth,
                                 std::uint64_t seed) {
  return exp_series_check(c, theta, exp_series_family(c, depth, seed));
}

// ---- bounded jacobian ------------------------------------------------------

AbstractSystemReport bounded_jacobian_check(int d, int depth) {
  if (d < 2 || depth < 1) throw Error(ErrorCode::InvalidParams, "need d >= 2 and depth >= 1");
  const std::size_t cells = ipow(d, depth);
  if (cells > kEnumerationBudget) {
    throw Error(ErrorCode::DepthUnsupported, "d^depth exceeds the enumeration budget");
  }
  AbstractSystemReport rep;
  rep.d = d;
  rep.depth = depth;
  rep.kappa = 0;
  rep.invariance_ok = true;
  const std::size_t tails = cells / static_cast<std::size_t>(d);
  const Rational dR(d);

  // A given as the set of depth-`depth` cells it contains.
  auto check = [&](const std::vector<char>& in_a, int cyl_len) {
    long na = 0;
    std::vector<char> image(tails, 0);
    for (std::size_t w = 0; w < cells; ++w) {
      if (!in_a[w]) continue;
      ++na;
      image[w % tails] = 1;  // drop x1
    }
    if (na == 0) return;
    long nf = 0;
    for (char x : image) nf += x;
    const Rational mA = frac(na, static_cast<long>(cells));
    const Rational mfA = frac(nf, static_cast<long>(tails));
    // f^-1(A) = {a w : w in A} at depth + 1.
    const Rational mpre = frac(na * d, static_cast<long>(cells) * d);
    rep.invariance_ok = rep.invariance_ok && mpre == mA;
    const Rational ratio = mfA / mA;
    if (ratio > rep.kappa) rep.kappa = ratio;
    if (cyl_len == 1 && ratio == dR) rep.kappa_tight = true;
    ++rep.sets_checked;
  };
  for (int k = 0; k <= depth; ++k) {
    const std::size_t nw = ipow(d, k), block = ipow(d, depth - k);
    for (std::size_t w = 0; w < nw; ++w) {
      std::vector<char> in_a(cells, 0);
      for (std::size_t c = 0; c < cells; ++c) in_a[c] = c / block == w;
      check(in_a, k);
    }
  }
  if (cells <= 16) {
    rep.unions_checked = true;
    for (std::uint32_t mask = 1; mask < (1u << cells); ++mask) {
      std::vector<char> in_a(cells, 0);
      for (std::size_t c = 0; c < cells; ++c) in_a[c] = (mask >> c) & 1u;
      check(in_a, -1);
    }
  }
  rep.delta = 0.5 * (1.0 + std::pow(static_cast<double>(d), 0.2));
  const Rational delta(rep.delta);
  const Rational d5 = delta * delta * delta * delta * delta;
  rep.delta_ok = d5 > 1 && d5 < dR;
  rep.ok = rep.invariance_ok && rep.kappa == dR && rep.kappa_tight && rep.delta_ok;
  return rep;
}

// ---- martingale decomposition --------------------------------------------------

ShiftDecomposition shift_martingale(const CylinderFunction& psi) {
  const CylinderFunction centred = psi.shifted(-psi.mean());
  const int m = psi.depth();
  CylinderFunction dbl = CylinderFunction::constant(psi.d(), 0);
  CylinderFunction term = centred;
  for (int n = 1; n < std::max(m, 1); ++n) {
    term = shift_transfer(term);
    dbl = dbl - term;
  }
  ShiftDecomposition out{centred - dbl + compose_shift(dbl, 1), dbl, std::max(m - 1, 0)};
  out.lambda_zero = shift_transfer(out.psi_prime).is_zero();
  out.orthogonal = true;
  const int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  for (const auto& p : pairs) {
    const Rational v = inner(compose_shift(out.psi_prime, p[0]), compose_shift(out.psi_prime, p[1]));
    out.orthogonal = out.orthogonal && v == 0;
  }
  out.reconstructs =
      (out.psi_prime + dbl - compose_shift(dbl, 1)).same_function(centred);
  return out;
}

std::vector<Rational> gordin_terms(const CylinderFunction& psi) {
  const CylinderFunction centred = psi.shifted(-psi.mean());
  std::vector<Rational> out;
  for (int n = 0; n <= psi.depth() + 1; ++n) out.push_back(l2_norm_sq(shift_conditional(centred, n)));
  return out;
}

// ---- Monte-Carlo mirror ------------------------------------------------------

ShiftSystem::ShiftSystem(int d) : d_(d), capacity_(0), top_(1) {
  if (d < 2) throw Error(ErrorCode::InvalidParams, "shift needs d >= 2");
  std::uint64_t p = 1;
  const auto du = static_cast<std::uint64_t>(d);
  while (p <= std::numeric_limits<std::uint64_t>::max() / du) {
    p *= du;
    ++capacity_;
  }
  top_ = p / du;
}

ShiftObservable::ShiftObservable(const CylinderFunction& c)
    : d_(c.d()), depth_(c.depth()), mean_(c.mean().get_d()) {
  table_.reserve(c.size());
  for (const auto& v : c.table()) table_.push_back(v.get_d());
}

}  // namespace greenlab
