#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "greenlab/system.hpp"

namespace greenlab {

using Rational = mpq_class;

// A function on the one-sided full d-shift that depends on the first `depth`
// symbols, stored as d^depth exact values. Cylinders are ordered
// lexicographically with x1 the most significant symbol.
class CylinderFunction {
 public:
  CylinderFunction(int d, int depth, std::vector<Rational> table);

  static CylinderFunction constant(int d, const Rational& c);
  // 1 on the cylinder [prefix], 0 elsewhere.
  static CylinderFunction indicator(int d, const std::vector<int>& prefix);

  int d() const noexcept { return d_; }
  int depth() const noexcept { return depth_; }
  std::size_t size() const noexcept { return table_.size(); }
  const std::vector<Rational>& table() const noexcept { return table_; }
  const Rational& operator[](std::size_t idx) const { return table_[idx]; }
  // Value at a word x1 x2 ... (at least depth symbols).
  const Rational& value(std::span<const int> word) const;

  Rational mean() const;
  // The same function written at a larger depth.
  CylinderFunction extend(int depth) const;
  // Smallest depth representing the same function.
  CylinderFunction reduced() const;

  CylinderFunction operator+(const CylinderFunction& o) const;
  CylinderFunction operator-(const CylinderFunction& o) const;
  CylinderFunction operator*(const CylinderFunction& o) const;
  CylinderFunction scaled(const Rational& c) const;
  CylinderFunction shifted(const Rational& c) const;  // f + c

  // Equal as functions (depths may differ).
  bool same_function(const CylinderFunction& o) const;
  bool is_zero() const;

 private:
  int d_;
  int depth_;
  std::vector<Rational> table_;
};

// Lambda c (x1..x_{m-1}) = (1/d) sum_a c(a x1 .. x_{m-1}); depth drops by one.
CylinderFunction shift_transfer(const CylinderFunction& c);
CylinderFunction shift_transfer(const CylinderFunction& c, int n);
// c o sigma^n, depth m + n.
CylinderFunction compose_shift(const CylinderFunction& c, int n);
// <m, a b> by enumeration.
Rational inner(const CylinderFunction& a, const CylinderFunction& b);
Rational l2_norm_sq(const CylinderFunction& a);

// <m, phi (psi o sigma^n)> - <phi><psi> by enumeration of the product.
Rational shift_correlation(const CylinderFunction& phi, const CylinderFunction& psi, int n);
// Same quantity through the adjoint form <m, (Lambda^n phi) psi> - <phi><psi>.
Rational shift_correlation_adjoint(const CylinderFunction& phi, const CylinderFunction& psi, int n);
// <m, psi0 (psi1 o sigma^n1)(psi2 o sigma^n2)> - prod <psi_i>.
Rational shift_multi_correlation(const CylinderFunction& psi0, const CylinderFunction& psi1,
                                 const CylinderFunction& psi2, int n1, int n2);

// E(psi | sigma^-n F) by averaging over the first n symbols of each fiber.
CylinderFunction shift_conditional(const CylinderFunction& psi, int n);

// Exact m{|S_n psi / n - <psi>| > eps}. Depth-1 observables use convolution;
// deeper ones enumerate words of length n + depth - 1 (DepthUnsupported beyond
// 2^20 words).
Rational shift_ldt_exact(const CylinderFunction& psi, int n, const Rational& eps);

inline constexpr std::uint64_t kEnumerationBudget = std::uint64_t{1} << 20;

enum class Verdict { proven, tight, violated };
std::string_view to_string(Verdict v) noexcept;

struct BennettCase {
  Rational nu;
  Rational lambda;
  int psi_checked = 0;
  Verdict worst = Verdict::proven;  // over the grid psi
  Verdict extremal = Verdict::tight;  // psi_0 = (-s^- b, s^+ b) attains the bound: tight, or proven when exact
  bool extremal_centered = false;     // -nu s^- + (1 - nu) s^+ == 0 exactly
  bool lambda_zero_exact = false;     // both sides equal 1 when lambda = 0
};

struct BennettReport {
  Rational b;
  std::vector<BennettCase> cases;
  int proven = 0;
  int tight = 0;
  int violated = 0;
  bool ok = false;
};

// Two-atom fiber (masses nu, 1 - nu); psi ranges over (u, v) with
// nu u + (1 - nu) v = 0 and |u|, |v| <= b, u on a grid of `u_steps` + 1 points.
// Exponentials use 256-bit MPFR with outward rounding on the left side and
// inward rounding on the right side.
BennettReport bennett_check(const Rational& b, std::span<const Rational> nu_grid,
                            std::span<const Rational> lambda_grid, int u_steps = 16);

struct FiberSetReport {
  int d = 0;
  int sets_checked = 0;
  bool ok = false;
};

// A = {x1 != 0} against every cylinder B of F_1 up to depth 3:
// m(A and B) == (1 - 1/d) m(B).
FiberSetReport fiber_set_check(int d);

struct ExpSeriesReport {
  Rational c;
  Rational theta;
  int terms = 0;
  std::vector<Verdict> chain;        // <e^xi_m> <= c^(1-theta) <e^xi_{m+1}>^theta
  std::vector<double> moment;        // <e^xi_m>, midpoint of the enclosure
  Verdict hypothesis = Verdict::proven;  // <m, e^eta_n> <= c, exact
  Verdict final = Verdict::proven;       // <e^xi_0> <= c
  bool ok = false;
};

// E[n][cell] = e^{eta_n} on 16 cells (depth 4 over 2 symbols), E >= 1.
// xi_m = (1 - theta) sum_{n >= m} theta^(n-m) eta_n.
ExpSeriesReport exp_series_check(const Rational& c, const Rational& theta,
                                 const std::vector<std::vector<Rational>>& E);
// Random family with exact moments <e^eta_n> <= c, `depth` series terms.
ExpSeriesReport exp_series_check(const Rational& c, const Rational& theta, int depth,
                                 std::uint64_t seed);
std::vector<std::vector<Rational>> exp_series_family(const Rational& c, int depth,
                                                     std::uint64_t seed);

inline constexpr int kExpSeriesCells = 16;

struct AbstractSystemReport {
  int d = 0;
  int depth = 0;
  Rational kappa;
  bool kappa_tight = false;  // attained on depth-1 cylinders
  bool invariance_ok = false;
  int sets_checked = 0;
  bool unions_checked = false;
  double delta = 0.0;
  bool delta_ok = false;  // 1 < delta^5 < d, exactly
  bool ok = false;
};

// Over all cylinder sets of depth <= depth (and all unions of depth-`depth`
// cylinders when there are at most 2^16 of them).
AbstractSystemReport bounded_jacobian_check(int d, int depth);

struct ShiftDecomposition {
  CylinderFunction psi_prime;
  CylinderFunction psi_dblprime;
  int truncation_N = 0;
  bool lambda_zero = false;     // Lambda psi' == 0
  bool orthogonal = false;      // <psi' o s^a, psi' o s^b> == 0, a < b <= 2
  bool reconstructs = false;    // psi' + psi'' - psi'' o s == psi - <psi>
};

ShiftDecomposition shift_martingale(const CylinderFunction& psi);

// ||E(psi|F_n)||^2 for n = 0..depth + 1; zero for n >= depth (centered psi).
std::vector<Rational> gordin_terms(const CylinderFunction& psi);

// The full shift as a DynamicalSystem: a point is a word packed base d with x1
// the least significant digit. Only the first capacity() symbols are kept.
class ShiftSystem {
 public:
  using Point = std::uint64_t;

  explicit ShiftSystem(int d);

  int degree() const noexcept { return d_; }
  int capacity() const noexcept { return capacity_; }
  Point forward(Point x) const noexcept { return x / static_cast<Point>(d_); }
  void preimages(Point x, std::vector<Point>& out) const {
    out.resize(static_cast<std::size_t>(d_));
    const Point tail = static_cast<Point>(d_) * (x % top_);
    for (int a = 0; a < d_; ++a) out[static_cast<std::size_t>(a)] = tail + static_cast<Point>(a);
  }
  double numerical_floor() const noexcept { return 0.0; }

 private:
  int d_;
  int capacity_;
  Point top_;
};

// Floating-point view of a cylinder function for the Monte-Carlo mirrors.
class ShiftObservable {
 public:
  explicit ShiftObservable(const CylinderFunction& c);

  double operator()(std::uint64_t word) const noexcept {
    std::size_t idx = 0;
    for (int i = 0; i < depth_; ++i) {
      idx = idx * static_cast<std::size_t>(d_) + static_cast<std::size_t>(word % d_);
      word /= static_cast<std::uint64_t>(d_);
    }
    return table_[idx];
  }
  std::optional<double> mean_hint() const noexcept { return mean_; }
  double decay_exponent() const noexcept { return 1.0; }

 private:
  int d_;
  int depth_;
  std::vector<double> table_;
  double mean_;
};

}  // namespace greenlab
