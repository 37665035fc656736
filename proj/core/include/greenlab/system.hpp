#pragma once

#include <concepts>
#include <cstdint>
#include <optional>
#include <vector>

#include "greenlab/rational_map.hpp"
#include "greenlab/rng.hpp"

namespace greenlab {

// A degree-d map with an exact fiber enumeration. The estimators in
// estimators.hpp are written once against this interface and run both on
// rational maps and on the full shift.
template <class S>
concept DynamicalSystem = requires(const S& s, const typename S::Point& p,
                                   std::vector<typename S::Point>& out) {
  { s.degree() } -> std::convertible_to<int>;
  { s.forward(p) } -> std::same_as<typename S::Point>;
  s.preimages(p, out);
  { s.numerical_floor() } -> std::convertible_to<double>;
};

// An observable on System points: callable plus optional exact mean.
template <class F, class Point>
concept PointFunction = requires(const F& f, const Point& p) {
  { f(p) } -> std::convertible_to<double>;
  { f.mean_hint() } -> std::convertible_to<std::optional<double>>;
  { f.decay_exponent() } -> std::convertible_to<double>;
};

class SphereSystem {
 public:
  using Point = SpherePoint;

  explicit SphereSystem(const RationalMap& f) noexcept : f_(&f) {}

  int degree() const noexcept { return f_->degree(); }
  Point forward(const Point& p) const noexcept { return f_->apply(p); }
  void preimages(const Point& p, std::vector<Point>& out) const { f_->preimage_roots(p, out); }
  // Relative accuracy of exact-tree values (root-finder backward residual).
  double numerical_floor() const noexcept { return kRootTolerance; }

  const RationalMap& map() const noexcept { return *f_; }

 private:
  const RationalMap* f_;
};

// One uniformly chosen backward step.
template <DynamicalSystem S>
typename S::Point backward_step(const S& sys, const typename S::Point& p, Stream& rng,
                                std::vector<typename S::Point>& scratch) {
  sys.preimages(p, scratch);
  return scratch[static_cast<std::size_t>(rng.below(static_cast<int>(scratch.size())))];
}

template <DynamicalSystem S>
typename S::Point backward_walk(const S& sys, typename S::Point p, int steps, Stream& rng,
                                std::vector<typename S::Point>& scratch) {
  for (int i = 0; i < steps; ++i) p = backward_step(sys, p, rng, scratch);
  return p;
}

// A mu-distributed forward orbit segment x_0, ..., x_{L-1} (x_{j+1} = f(x_j)),
// generated as the reversal of a random backward walk of length burn_in + L - 1.
// No forward floating-point iteration is involved, so the segment cannot drift
// off a repelling support.
template <DynamicalSystem S>
void orbit_segment(const S& sys, const typename S::Point& start, int burn_in, int length,
                   Stream& rng, std::vector<typename S::Point>& out,
                   std::vector<typename S::Point>& scratch) {
  out.resize(static_cast<std::size_t>(length));
  typename S::Point y = backward_walk(sys, start, burn_in, rng, scratch);
  out[static_cast<std::size_t>(length - 1)] = y;
  for (int j = length - 2; j >= 0; --j) {
    y = backward_step(sys, y, rng, scratch);
    out[static_cast<std::size_t>(j)] = y;
  }
}

}  // namespace greenlab
