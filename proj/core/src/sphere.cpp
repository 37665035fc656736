#include "greenlab/sphere.hpp"

#include <cmath>
#include <limits>

namespace greenlab {

SpherePoint SpherePoint::from_z(Complex z) noexcept {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return infinity();
  if (std::norm(z) <= 4.0) return {z, Chart::z};
  return {1.0 / z, Chart::w};
}

SpherePoint SpherePoint::from_homogeneous(Complex num, Complex den) noexcept {
  if (std::norm(num) <= 4.0 * std::norm(den)) return {num / den, Chart::z};
  return {den / num, Chart::w};
}

Complex SpherePoint::z() const noexcept {
  if (chart_ == Chart::z) return coord_;
  if (coord_ == Complex{}) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    return {inf, inf};
  }
  return 1.0 / coord_;
}

SpherePoint SpherePoint::canonical() const noexcept {
  const auto [a, b] = lift();
  return from_homogeneous(a, b);
}

SpherePoint SpherePoint::as_chart(Chart chart) const noexcept {
  if (chart == chart_) return *this;
  return {1.0 / coord_, chart};
}

double chordal(const SpherePoint& p, const SpherePoint& q) noexcept {
  const auto [a0, a1] = p.lift();
  const auto [b0, b1] = q.lift();
  const double num = std::abs(a0 * b1 - a1 * b0);
  const double den = std::sqrt((std::norm(a0) + std::norm(a1)) * (std::norm(b0) + std::norm(b1)));
  return num / den;
}

}  // namespace greenlab
