#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "greenlab/sphere.hpp"

namespace greenlab {

enum class ObservableClass { trig_poly, holder, log_singular, composite };

std::string_view to_string(ObservableClass cls) noexcept;

// Chordal distance below which a log-singular observable is clamped.
inline constexpr double kSingularCutoff = 1e-12;

// A real function on the sphere with a regularity tag. The tag, not a norm,
// decides which decay rate the statistical checks expect: d^-n for trig
// polynomials and log-singular functions, d^(-n nu/2) for nu-Holder ones.
class Observable {
 public:
  using Evaluator = std::function<double(const SpherePoint&)>;
  using Predicate = std::function<bool(const SpherePoint&)>;

  // Re sum_k a_k z^k (k from 0). On |z| = 1 this is the trig polynomial
  // sum_k Re(a_k e^{ik theta}).
  static Observable trig_poly(std::vector<Complex> coeffs);
  // chordal(z, center)^nu, nu in (0, 2].
  static Observable holder_dist_pow(double nu, SpherePoint center);
  // beta * log chordal(z, center), clamped at kSingularCutoff.
  static Observable log_singular(double beta, SpherePoint center);
  static Observable constant(double c);
  static Observable custom(ObservableClass cls, Evaluator eval, double decay_exponent = 1.0,
                           std::string description = "custom");

  double operator()(const SpherePoint& p) const { return eval_(p); }

  ObservableClass cls() const noexcept { return cls_; }
  // Expected correlation decay is d^(-n * decay_exponent()).
  double decay_exponent() const noexcept { return decay_exponent_; }
  bool bounded() const noexcept { return bounded_; }
  // True where the evaluation is clamped (log-singular parts only).
  bool singular_hit(const SpherePoint& p) const { return singular_ && singular_(p); }

  std::optional<double> mean_hint() const noexcept { return mean_hint_; }
  Observable& set_mean_hint(std::optional<double> m) noexcept {
    mean_hint_ = m;
    return *this;
  }

  const std::string& description() const noexcept { return description_; }

 private:
  friend Observable linear_combination(const std::vector<std::pair<double, Observable>>& terms);

  Evaluator eval_;
  Predicate singular_;
  ObservableClass cls_ = ObservableClass::composite;
  double decay_exponent_ = 1.0;
  bool bounded_ = true;
  std::optional<double> mean_hint_;
  std::string description_;
};

// sum_i c_i obs_i. Decay exponent is the slowest of the parts; the mean hint is
// kept only when every part has one.
Observable linear_combination(const std::vector<std::pair<double, Observable>>& terms);

}  // namespace greenlab
