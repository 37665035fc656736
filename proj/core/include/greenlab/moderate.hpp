#pragma once

#include <span>

#include "greenlab/measure.hpp"

namespace greenlab {

// Empirical mu{psi < -M} over an increasing grid, fitted as c' exp(-alpha' M) by
// weighted least squares on log tail over grid points with tail > 3 stderr.
// Returns a degenerate report when every tail is 0; throws InsufficientTailData
// when fewer than 3 grid points survive otherwise.
ModerateReport psh_tail_exponent(const EmpiricalMeasure& mu, const Observable& psi,
                                 std::span<const double> m_grid);

// Slope of log mu(B(center, r)) against log r over radii with >= 30 hits.
BallMassReport ball_mass_exponent(const EmpiricalMeasure& mu, const SpherePoint& center,
                                  std::span<const double> radii);

inline constexpr int kMinBallHits = 30;

}  // namespace greenlab
