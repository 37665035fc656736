#include "greenlab/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "greenlab/error.hpp"
#include "greenlab/estimators.hpp"
#include "greenlab/parallel.hpp"
#include "greenlab/rng.hpp"
#include "greenlab/stats.hpp"

namespace greenlab {

bool EmpiricalMeasure::uniform() const noexcept {
  if (weights.empty()) return true;
  return std::all_of(weights.begin(), weights.end(),
                     [&](double w) { return w == weights.front(); });
}

EmpiricalMeasure EmpiricalMeasure::from_points(std::vector<SpherePoint> points,
                                               std::vector<double> weights) {
  if (points.empty()) throw Error(ErrorCode::InvalidParams, "measure needs at least one point");
  EmpiricalMeasure mu;
  const std::size_t n = points.size();
  if (weights.empty()) {
    weights.assign(n, 1.0 / static_cast<double>(n));
  } else {
    if (weights.size() != n) throw Error(ErrorCode::InvalidParams, "weights/points size mismatch");
    double total = 0.0;
    for (double w : weights) {
      if (!(w >= 0.0)) throw Error(ErrorCode::InvalidParams, "weights must be nonnegative");
      total += w;
    }
    if (!(total > 0.0)) throw Error(ErrorCode::InvalidParams, "weights sum to zero");
    for (double& w : weights) w /= total;
  }
  mu.points = std::move(points);
  mu.weights = std::move(weights);
  mu.meta.n_samples = static_cast<int>(n);
  mu.meta.start = default_start();
  return mu;
}

void check_start(const RationalMap& f, const SpherePoint& start) {
  constexpr double merge = 1e-5;
  std::vector<SpherePoint> level{start};
  int small = 0;
  for (int step = 0; step < 3; ++step) {
    std::vector<SpherePoint> next;
    for (const auto& p : level) {
      for (const auto& pre : f.preimages(p)) {
        const bool seen = std::any_of(next.begin(), next.end(), [&](const SpherePoint& q) {
          return chordal(q, pre.point) < merge;
        });
        if (!seen) next.push_back(pre.point);
      }
      if (next.size() > 2) break;
    }
    if (next.size() > 2) return;
    ++small;
    level = std::move(next);
  }
  if (small == 3) {
    throw Error(ErrorCode::ExceptionalStart,
                "start point lies in a totally invariant finite set (backward orbit collapses)");
  }
}

EmpiricalMeasure sample_equilibrium(const RationalMap& f, const SamplerParams& params) {
  if (params.n_samples < 1) throw Error(ErrorCode::InvalidParams, "n_samples must be >= 1");
  if (params.burn_in < 30) throw Error(ErrorCode::InvalidParams, "burn_in must be >= 30");
  check_start(f, params.start);
  const SphereSystem sys(f);
  auto pts = sample_cloud(sys, params.start, params.n_samples, params.burn_in, params.seed);
  EmpiricalMeasure mu = EmpiricalMeasure::from_points(std::move(pts));
  mu.meta.seed = params.seed;
  mu.meta.burn_in = params.burn_in;
  mu.meta.map_fingerprint = f.fingerprint();
  mu.meta.start = params.start;
  return mu;
}

EmpiricalMeasure sample_equilibrium(const RationalMap& f, int n_samples, int burn_in,
                                    std::uint64_t seed) {
  SamplerParams p;
  p.n_samples = n_samples;
  p.burn_in = burn_in;
  p.seed = seed;
  return sample_equilibrium(f, p);
}

Integral integrate(const EmpiricalMeasure& mu, const Observable& obs) {
  const std::size_t n = mu.size();
  std::vector<double> v(n);
  std::vector<char> bad(n, 0);
  parallel_for(n, [&](std::size_t i) {
    v[i] = obs(mu.points[i]);
    bad[i] = !std::isfinite(v[i]) || obs.singular_hit(mu.points[i]);
  });
  MeanAccumulator acc;
  Integral out;
  for (std::size_t i = 0; i < n; ++i) {
    if (bad[i]) {
      ++out.rejected;
    } else {
      acc.add(v[i], mu.weights[i]);
    }
  }
  if (static_cast<double>(out.rejected) > 1e-3 * static_cast<double>(n)) {
    throw Error(ErrorCode::TooManySingularHits,
                std::to_string(out.rejected) + " of " + std::to_string(n) +
                    " evaluations are singular");
  }
  out.value = acc.mean();
  out.std_err = acc.std_err();
  return out;
}

GreenValue green_function(const RationalMap& f, const SpherePoint& p, int n_iter) {
  if (n_iter < 1) throw Error(ErrorCode::InvalidParams, "n_iter must be >= 1");
  auto [a, b] = p.lift();
  const double norm0 = std::sqrt(std::norm(a) + std::norm(b));
  GreenValue g;
  g.affine = std::isfinite(norm0) && b != Complex{} ? std::log(norm0) - std::log(std::abs(b))
                                                    : std::numeric_limits<double>::infinity();
  a /= norm0;
  b /= norm0;
  const double d = f.degree();
  double weight = 1.0 / d;
  double c = 0.0;
  for (int j = 0; j < n_iter; ++j) {
    const auto [P, Q] = f.apply_lift(a, b);
    const double nrm = std::sqrt(std::norm(P) + std::norm(Q));
    const double l = std::log(nrm);
    c = std::max(c, std::abs(l));
    g.increments.push_back(weight * l);
    g.potential += weight * l;
    a = P / nrm;
    b = Q / nrm;
    weight /= d;
  }
  g.affine += g.potential;
  g.tail_bound = c * std::pow(d, -n_iter) / (d - 1.0);
  return g;
}

ExpMomentReport exp_moment(const EmpiricalMeasure& mu, const Observable& obs, double alpha) {
  if (!(alpha >= 0.0)) throw Error(ErrorCode::InvalidParams, "alpha must be >= 0");
  const std::size_t n = mu.size();
  std::vector<double> v(n);
  parallel_for(n, [&](std::size_t i) {
    if (alpha == 0.0) {
      v[i] = 1.0;
      return;
    }
    const double x = obs(mu.points[i]);
    v[i] = std::isfinite(x) ? std::exp(alpha * std::abs(x))
                            : std::numeric_limits<double>::infinity();
  });
  ExpMomentReport r;
  MeanAccumulator acc;
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(v[i])) ++r.non_finite;
    acc.add(v[i], mu.weights[i]);
  }
  r.flagged = r.non_finite > 0;
  r.value = r.flagged ? std::numeric_limits<double>::infinity() : acc.mean();
  r.std_err = r.flagged ? std::numeric_limits<double>::infinity() : acc.std_err();
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  const std::size_t k = std::min<std::size_t>(5, n);
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(),
                    [&](std::size_t x, std::size_t y) {
                      const double cx = v[x] * mu.weights[x], cy = v[y] * mu.weights[y];
                      return cx > cy || (cx == cy && x < y);
                    });
  for (std::size_t i = 0; i < k; ++i) r.top.emplace_back(idx[i], v[idx[i]] * mu.weights[idx[i]]);
  return r;
}

EmpiricalMeasure uniform_disc(Complex center, double radius, int n, std::uint64_t seed) {
  if (n < 1 || !(radius > 0.0)) throw Error(ErrorCode::InvalidParams, "bad disc parameters");
  std::vector<SpherePoint> pts(static_cast<std::size_t>(n));
  parallel_for(pts.size(), [&](std::size_t i) {
    Stream rng(seed, Purpose::synthetic, i);
    const double r = radius * std::sqrt(rng.uniform());
    const double t = 2.0 * std::numbers::pi * rng.uniform();
    pts[i] = SpherePoint::from_z(center + std::polar(r, t));
  });
  EmpiricalMeasure mu = EmpiricalMeasure::from_points(std::move(pts));
  mu.meta.seed = seed;
  return mu;
}

double mean_distance_to_unit_circle(const EmpiricalMeasure& mu) {
  double s = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const SpherePoint& p = mu.points[i];
    const Complex c = p.coord();
    const double r = std::abs(c);
    const SpherePoint nearest = r > 0.0 ? SpherePoint::in_chart(c / r, p.chart())
                                        : SpherePoint::from_z({1.0, 0.0});
    s += mu.weights[i] * chordal(p, nearest);
  }
  return s;
}

}  // namespace greenlab
