#include "greenlab/moderate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "greenlab/error.hpp"
#include "greenlab/parallel.hpp"
#include "greenlab/stats.hpp"

namespace greenlab {

namespace {

double n_effective(const EmpiricalMeasure& mu) {
  double s2 = 0.0;
  for (double w : mu.weights) s2 += w * w;
  return 1.0 / s2;
}

}  // namespace

ModerateReport psh_tail_exponent(const EmpiricalMeasure& mu, const Observable& psi,
                                 std::span<const double> m_grid) {
  if (m_grid.empty()) throw Error(ErrorCode::InvalidParams, "empty M grid");
  for (std::size_t k = 1; k < m_grid.size(); ++k) {
    if (!(m_grid[k] > m_grid[k - 1])) throw Error(ErrorCode::InvalidParams, "M grid must increase");
  }
  const std::size_t n = mu.size();
  std::vector<double> v(n);
  parallel_for(n, [&](std::size_t i) { v[i] = psi(mu.points[i]); });
  const double n_eff = n_effective(mu);

  ModerateReport r;
  r.m_grid.assign(m_grid.begin(), m_grid.end());
  bool all_zero = true;
  std::vector<double> xs, ys, ws;
  for (std::size_t k = 0; k < m_grid.size(); ++k) {
    double t = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (v[i] < -m_grid[k]) t += mu.weights[i];
    }
    const double se = std::sqrt(t * (1.0 - t) / n_eff);
    r.tail.push_back(t);
    r.tail_stderr.push_back(se);
    if (t > 0.0) all_zero = false;
    if (t > 3.0 * se && t < 1.0) {
      if (r.fit_window.first < 0) r.fit_window.first = static_cast<int>(k);
      r.fit_window.second = static_cast<int>(k);
      xs.push_back(m_grid[k]);
      ys.push_back(std::log(t));
      ws.push_back((t / se) * (t / se));
    }
  }
  if (all_zero) {
    r.degenerate = true;
    r.fit_window = {-1, -1};
    return r;
  }
  if (xs.size() < 3) {
    throw Error(ErrorCode::InsufficientTailData,
                std::to_string(xs.size()) + " grid points pass the 3-stderr filter (need 3)");
  }
  const LineFit fit = fit_line(xs, ys, ws);
  r.alpha_hat = -fit.slope;
  r.alpha_halfwidth = kHalfWidthZ * fit.slope_se;
  r.c_hat = std::exp(fit.intercept);
  return r;
}

BallMassReport ball_mass_exponent(const EmpiricalMeasure& mu, const SpherePoint& center,
                                  std::span<const double> radii) {
  if (radii.empty()) throw Error(ErrorCode::InvalidParams, "empty radius grid");
  for (std::size_t k = 1; k < radii.size(); ++k) {
    if (!(radii[k] < radii[k - 1])) throw Error(ErrorCode::InvalidParams, "radii must decrease");
  }
  const std::size_t n = mu.size();
  std::vector<double> dist(n);
  parallel_for(n, [&](std::size_t i) { dist[i] = chordal(mu.points[i], center); });
  const double n_eff = n_effective(mu);

  BallMassReport r;
  r.radii.assign(radii.begin(), radii.end());
  r.nearest_sample = *std::min_element(dist.begin(), dist.end());
  std::vector<double> xs, ys, ws;
  bool all_zero = true;
  for (std::size_t k = 0; k < radii.size(); ++k) {
    double m = 0.0;
    int hits = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (dist[i] < radii[k]) {
        m += mu.weights[i];
        ++hits;
      }
    }
    const double se = std::sqrt(m * (1.0 - m) / n_eff);
    r.mass.push_back(m);
    r.mass_stderr.push_back(se);
    r.hits.push_back(hits);
    if (hits > 0) all_zero = false;
    if (hits >= kMinBallHits && m < 1.0) {
      if (r.fit_window.first < 0) r.fit_window.first = static_cast<int>(k);
      r.fit_window.second = static_cast<int>(k);
      xs.push_back(std::log(radii[k]));
      ys.push_back(std::log(m));
      ws.push_back((m / se) * (m / se));
    }
  }
  if (all_zero || r.nearest_sample >= radii.front()) {
    r.degenerate = true;
    r.fit_window = {-1, -1};
    return r;
  }
  if (xs.size() < 3) {
    throw Error(ErrorCode::InsufficientTailData,
                std::to_string(xs.size()) + " radii have >= 30 hits (need 3)");
  }
  const LineFit fit = fit_line(xs, ys, ws);
  r.alpha_hat = fit.slope;
  r.alpha_halfwidth = kHalfWidthZ * fit.slope_se;
  return r;
}

}  // namespace greenlab
