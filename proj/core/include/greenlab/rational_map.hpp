#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "greenlab/sphere.hpp"

namespace greenlab {

struct Preimage {
  SpherePoint point;
  int multiplicity = 1;
};

// Backward-residual tolerance of the preimage solver: every root r satisfies
// |h(r)| <= tol * sum_k |h_k| |r|^k in the chart where r is stored.
inline constexpr double kRootTolerance = 1e-10;

// A degree-d holomorphic self-map of the sphere, z -> numer(z)/denom(z).
// Coefficients are stored lowest order first and padded to length d + 1, which
// is also the coefficient list of the homogeneous lift
// F(Z0, Z1) = (sum p_k Z0^k Z1^(d-k), sum q_k Z0^k Z1^(d-k)).
class RationalMap {
 public:
  int degree() const noexcept { return degree_; }
  std::span<const Complex> numer() const noexcept { return numer_; }
  std::span<const Complex> denom() const noexcept { return denom_; }
  // Relative size of the homogeneous resultant (|Res| over its Hadamard bound).
  double resultant_ratio() const noexcept { return resultant_ratio_; }

  SpherePoint apply(const SpherePoint& p) const noexcept;
  // Homogeneous lift of f applied to an arbitrary lift (a, b).
  std::pair<Complex, Complex> apply_lift(Complex a, Complex b) const noexcept;
  SpherePoint iterate(const SpherePoint& p, int n) const;

  // All d roots of f(y) = p with repetition, in the solver's deterministic
  // order. Hot path of the samplers and of transfer trees.
  void preimage_roots(const SpherePoint& p, std::vector<SpherePoint>& out) const;
  // Roots clustered at chordal radius sqrt(tol); multiplicities sum to d.
  std::vector<Preimage> preimages(const SpherePoint& p) const;

  // Stable text digest of the coefficients, carried in measure metadata.
  std::string fingerprint() const;

 private:
  friend RationalMap make_rational_map(std::vector<Complex> numer, std::vector<Complex> denom);

  int degree_ = 0;
  std::vector<Complex> numer_;
  std::vector<Complex> denom_;
  double resultant_ratio_ = 0.0;
};

// Validates and builds a map. Throws DegreeTooLow when max(deg numer, deg denom)
// < 2 and DegenerateMap when numer and denom share a root on the sphere
// (relative resultant below 1e-10).
RationalMap make_rational_map(std::vector<Complex> numer, std::vector<Complex> denom);

inline SpherePoint apply(const RationalMap& f, const SpherePoint& p) { return f.apply(p); }
inline SpherePoint iterate(const RationalMap& f, const SpherePoint& p, int n) {
  return f.iterate(p, n);
}
inline std::vector<Preimage> preimages(const RationalMap& f, const SpherePoint& p) {
  return f.preimages(p);
}

namespace poly {

// Roots of h(z) = sum_k coeffs[k] z^k, counted up to the formal degree
// coeffs.size() - 1 (missing leading terms are roots at infinity). Throws
// RootFindingFailed when the backward-residual bound cannot be met.
void solve(std::span<const Complex> coeffs, std::vector<SpherePoint>& roots,
           double tol = kRootTolerance);

// Backward residual of `root` for h in the chart the root is stored in.
double backward_residual(std::span<const Complex> coeffs, const SpherePoint& root);

}  // namespace poly

}  // namespace greenlab
