#include "greenlab/transfer.hpp"

#include <algorithm>
#include <cmath>

#include "greenlab/error.hpp"
#include "greenlab/estimators.hpp"
#include "greenlab/parallel.hpp"
#include "greenlab/system.hpp"

namespace greenlab {

namespace {

// Counts clamped evaluations while forwarding to the observable.
struct CountingObservable {
  const Observable* obs;
  mutable std::size_t hits = 0;

  double operator()(const SpherePoint& p) const {
    if (obs->singular_hit(p)) ++hits;
    return (*obs)(p);
  }
  std::optional<double> mean_hint() const { return obs->mean_hint(); }
  double decay_exponent() const { return obs->decay_exponent(); }
};

std::span<const SpherePoint> head(const EmpiricalMeasure& mu, int max_points) {
  const std::size_t n = std::min<std::size_t>(mu.size(), static_cast<std::size_t>(max_points));
  return {mu.points.data(), n};
}

void require_uniform(const EmpiricalMeasure& mu) {
  if (mu.size() == 0) throw Error(ErrorCode::InvalidParams, "empty measure");
  if (!mu.uniform()) {
    throw Error(ErrorCode::InvalidParams, "cloud estimators need a uniformly weighted measure");
  }
}

}  // namespace

TransferValue transfer(const RationalMap& f, const Observable& obs, const SpherePoint& p, int n,
                       const TransferBudget& budget) {
  const SphereSystem sys(f);
  CountingObservable counted{&obs};
  TransferValue v = transfer_value(sys, counted, p, n, budget);
  v.singular_hits = counted.hits;
  return v;
}

GordinReport gordin_sequence(const RationalMap& f, const EmpiricalMeasure& mu,
                             const Observable& obs, int N, const TransferBudget& budget) {
  if (N < 1) throw Error(ErrorCode::InvalidParams, "gordin_sequence needs N >= 1");
  require_uniform(mu);
  const SphereSystem sys(f);
  const Observable* list[] = {&obs};
  const LevelTable t = cloud_levels(sys, std::span<const SpherePoint>(mu.points),
                                    std::span<const Observable* const>(list), N, budget);
  return gordin_from_levels(sys, obs, t, 0, N);
}

MartingaleDecomposition martingale_decompose(const RationalMap& f, const Observable& obs,
                                             const EmpiricalMeasure& mu,
                                             const DecomposeParams& params) {
  require_uniform(mu);
  if (!(params.tol > 0.0)) throw Error(ErrorCode::InvalidParams, "tol must be > 0");
  const SphereSystem sys(f);
  const auto cloud = head(mu, params.max_points);
  const Observable* list[] = {&obs};
  const std::span<const Observable* const> obs_list(list);

  MartingaleDecomposition dec;
  LevelTable t;
  int N = -1;
  const int cap = std::max(1, params.budget.exact_depth_max);
  std::vector<int> depths;
  for (int D : {4, 8, 12}) depths.push_back(std::min(D, cap));
  if (params.force_N) depths = {std::max(*params.force_N, 1)};
  for (int D : depths) {
    if (D <= t.depth() && t.points() > 0) continue;
    t = cloud_levels(sys, cloud, obs_list, D, params.budget);
    dec.mean = resolve_mean(obs, t, 0);
    dec.norms.clear();
    for (int n = 0; n <= D; ++n) {
      double s = 0.0;
      for (std::size_t i = 0; i < t.points(); ++i) {
        const double v = t.at(i, 0, n) - dec.mean.value;
        s += v * v;
      }
      dec.norms.push_back(std::sqrt(s / static_cast<double>(t.points())));
    }
    if (params.force_N) break;
    for (int n = 1; n <= D; ++n) {
      if (dec.norms[static_cast<std::size_t>(n)] < params.tol) {
        N = n;
        break;
      }
    }
    if (N >= 0) break;
  }
  const int D = t.depth();
  if (params.force_N) {
    N = *params.force_N;
    if (N < 0) throw Error(ErrorCode::InvalidParams, "truncation N must be >= 0");
  } else if (N < 0) {
    if (D >= 5 && dec.norms[static_cast<std::size_t>(D)] >
                      std::pow(0.9, 5) * dec.norms[static_cast<std::size_t>(D - 5)]) {
      throw Error(ErrorCode::NoDecayDetected,
                  "||Lambda^n psi|| did not shrink by 0.9 per step over the last 5 steps");
    }
    N = D;
  }
  dec.truncation_N = N;

  const double m = dec.mean.value;
  const double q = std::pow(static_cast<double>(f.degree()), -obs.decay_exponent());
  double sup_last = 0.0, sup_psi = 0.0;
  const int last = std::min(std::max(N, 0), D);
  for (std::size_t i = 0; i < t.points(); ++i) {
    sup_last = std::max(sup_last, std::abs(t.at(i, 0, last) - m));
    sup_psi = std::max(sup_psi, std::abs(t.at(i, 0, 0)));
  }
  const double floor = kRootTolerance * std::max(1.0, sup_psi) * (N + 2);
  dec.tail_bound = (N == 0 ? sup_last / (1.0 - q) : sup_last * q / (1.0 - q)) + floor;

  const RationalMap map = f;
  const Observable psi = obs;
  Observable::Evaluator dbl;
  if (N == 0) {
    dbl = [](const SpherePoint&) { return 0.0; };
  } else {
    dbl = [map, psi, N, m](const SpherePoint& x) {
      const SphereSystem s(map);
      const Observable* l[] = {&psi};
      std::vector<double> lv(static_cast<std::size_t>(N + 1));
      tree_levels(s, x, std::span<const Observable* const>(l), N, lv.data());
      double acc = 0.0;
      for (int n = 1; n <= N; ++n) acc -= lv[static_cast<std::size_t>(n)] - m;
      return acc;
    };
  }
  dec.psi_dblprime = Observable::custom(ObservableClass::composite, dbl, obs.decay_exponent(),
                                        "psi''(" + obs.description() + ")");
  dec.psi_dblprime.set_mean_hint(0.0);
  dec.psi_prime = Observable::custom(
      ObservableClass::composite,
      [map, psi, dbl, m](const SpherePoint& x) {
        return psi(x) - m - dbl(x) + dbl(map.apply(x));
      },
      obs.decay_exponent(), "psi'(" + obs.description() + ")");
  dec.psi_prime.set_mean_hint(0.0);
  return dec;
}

MartingaleCheck check_martingale(const RationalMap& f, const EmpiricalMeasure& mu,
                                 const MartingaleDecomposition& dec,
                                 const MartingaleCheckParams& params) {
  require_uniform(mu);
  const SphereSystem sys(f);
  const auto cloud = head(mu, params.max_points);
  MartingaleCheck r;
  r.tol = params.tol;

  std::vector<double> sq(cloud.size());
  parallel_for(cloud.size(), [&](std::size_t i) {
    std::vector<SpherePoint> pre;
    sys.preimages(cloud[i], pre);
    double s = 0.0;
    for (const auto& y : pre) s += dec.psi_prime(y);
    const double v = s / static_cast<double>(pre.size());
    sq[i] = v * v;
  });
  const Estimate e = mean_estimate(sq);
  r.lambda_norm = std::sqrt(e.value);
  r.lambda_norm_stderr = r.lambda_norm > 0.0 ? e.std_err / (2.0 * r.lambda_norm) : std::sqrt(e.std_err);
  r.lambda_ok = r.lambda_norm <= std::max(params.tol, 5.0 * r.lambda_norm_stderr);

  const OrbitParams op{params.n_orbits, params.burn_in, params.seed};
  const std::size_t n_orb = static_cast<std::size_t>(params.n_orbits);
  std::vector<double> v(n_orb * 3);
  for_each_orbit(sys, mu.meta.start, 3, op, [&](std::size_t i, auto seg) {
    const double p0 = dec.psi_prime(seg[0]);
    const double p1 = dec.psi_prime(seg[1]);
    const double p2 = dec.psi_prime(seg[2]);
    v[i * 3 + 0] = p0 * p1;
    v[i * 3 + 1] = p0 * p2;
    v[i * 3 + 2] = p1 * p2;
  });
  const int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  r.ok = r.lambda_ok;
  for (int k = 0; k < 3; ++k) {
    MeanAccumulator acc;
    for (std::size_t i = 0; i < n_orb; ++i) acc.add(v[i * 3 + static_cast<std::size_t>(k)]);
    MartingaleCheck::Pair pr;
    pr.a = pairs[k][0];
    pr.b = pairs[k][1];
    pr.value = acc.mean();
    pr.std_err = acc.std_err();
    pr.ok = std::abs(pr.value) <= std::max(params.tol, 5.0 * pr.std_err);
    r.ok = r.ok && pr.ok;
    r.orthogonality.push_back(pr);
  }
  return r;
}

ReconstructionCheck check_reconstruction(const RationalMap& f, const Observable& obs,
                                         const EmpiricalMeasure& mu,
                                         const MartingaleDecomposition& dec, int points,
                                         const TransferBudget& budget) {
  if (points < 1 || mu.size() == 0) throw Error(ErrorCode::InvalidParams, "no test points");
  const double m = dec.mean.value;
  const int N = dec.truncation_N;
  auto dbl_ref = [&](const SpherePoint& x) {
    double acc = 0.0;
    for (int n = 1; n <= N; ++n) acc -= transfer(f, obs, x, n, budget).value - m;
    return acc;
  };
  ReconstructionCheck r;
  r.points = points;
  r.tail_bound = dec.tail_bound;
  std::vector<double> err(static_cast<std::size_t>(points));
  const std::size_t stride = std::max<std::size_t>(1, mu.size() / static_cast<std::size_t>(points));
  parallel_for(err.size(), [&](std::size_t k) {
    const SpherePoint& x = mu.points[(k * stride) % mu.size()];
    const double lhs = dec.psi_prime(x) + dbl_ref(x) - dbl_ref(f.apply(x));
    err[k] = std::abs(lhs - (obs(x) - m));
  });
  for (double e : err) r.max_error = std::max(r.max_error, e);
  r.ok = r.max_error <= r.tail_bound;
  return r;
}

ExpMomentReport exp_moment_transfer(const RationalMap& f, const EmpiricalMeasure& mu,
                                    const Observable& obs, double alpha, int n,
                                    const TransferBudget& budget) {
  if (!(alpha >= 0.0)) throw Error(ErrorCode::InvalidParams, "alpha must be >= 0");
  if (n < 0) throw Error(ErrorCode::InvalidParams, "n must be >= 0");
  require_uniform(mu);
  const SphereSystem sys(f);
  const Observable* list[] = {&obs};
  const int depth = std::max(n, 1);
  const LevelTable t = cloud_levels(sys, std::span<const SpherePoint>(mu.points),
                                    std::span<const Observable* const>(list), depth, budget);
  const double m = resolve_mean(obs, t, 0).value;
  const double scale = alpha * std::pow(static_cast<double>(f.degree()), n);
  std::vector<double> v(t.points());
  ExpMomentReport r;
  for (std::size_t i = 0; i < t.points(); ++i) {
    v[i] = alpha == 0.0 ? 1.0 : std::exp(scale * std::abs(t.at(i, 0, n) - m));
    if (!std::isfinite(v[i])) ++r.non_finite;
  }
  r.flagged = r.non_finite > 0;
  const Estimate e = mean_estimate(v);
  r.value = e.value;
  r.std_err = e.std_err;
  std::vector<std::size_t> idx(v.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  const std::size_t k = std::min<std::size_t>(5, idx.size());
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(),
                    [&](std::size_t a, std::size_t b) { return v[a] > v[b] || (v[a] == v[b] && a < b); });
  for (std::size_t i = 0; i < k; ++i) r.top.emplace_back(idx[i], v[idx[i]] / static_cast<double>(v.size()));
  return r;
}

}  // namespace greenlab
