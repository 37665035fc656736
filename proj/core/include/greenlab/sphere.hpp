#pragma once

#include <complex>
#include <cstdint>
#include <utility>

namespace greenlab {

using Complex = std::complex<double>;

// z is the affine coordinate; w = 1/z covers the neighbourhood of infinity.
enum class Chart : std::uint8_t { z = 0, w = 1 };

// A point of the Riemann sphere stored in one of two affine charts.
//
// Canonical points keep |coord| <= 2: the z chart is used whenever |z| <= 2,
// otherwise the w chart (|w| < 1/2). All arithmetic in the library works on a
// point's homogeneous lift, so neither chart ever overflows.
class SpherePoint {
 public:
  constexpr SpherePoint() = default;

  static SpherePoint from_z(Complex z) noexcept;
  static SpherePoint infinity() noexcept { return SpherePoint({0.0, 0.0}, Chart::w); }
  // The point [num : den] = num/den. (0, 0) is not a point; callers never pass it.
  static SpherePoint from_homogeneous(Complex num, Complex den) noexcept;
  // Raw representation in a forced chart. Not re-charted.
  static SpherePoint in_chart(Complex coord, Chart chart) noexcept { return {coord, chart}; }

  Complex coord() const noexcept { return coord_; }
  Chart chart() const noexcept { return chart_; }

  // Affine coordinate; infinite at the point at infinity.
  Complex z() const noexcept;
  bool is_infinity() const noexcept { return chart_ == Chart::w && coord_ == Complex{}; }

  // Homogeneous lift (Z0, Z1) with z = Z0/Z1 and max(|Z0|, |Z1|) <= 2.
  std::pair<Complex, Complex> lift() const noexcept {
    return chart_ == Chart::z ? std::pair{coord_, Complex{1.0, 0.0}}
                              : std::pair{Complex{1.0, 0.0}, coord_};
  }

  SpherePoint canonical() const noexcept;
  // Same point expressed in `chart`; the point must be finite in that chart.
  SpherePoint as_chart(Chart chart) const noexcept;

  friend bool operator==(const SpherePoint&, const SpherePoint&) = default;

 private:
  constexpr SpherePoint(Complex c, Chart ch) : coord_(c), chart_(ch) {}

  Complex coord_{};
  Chart chart_ = Chart::z;
};

// Chordal (Fubini-Study) distance normalized to diameter 1:
// |a0 b1 - a1 b0| / (|a| |b|) for lifts a, b.
double chordal(const SpherePoint& a, const SpherePoint& b) noexcept;

}  // namespace greenlab
