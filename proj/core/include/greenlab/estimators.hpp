#pragma once

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "greenlab/error.hpp"
#include "greenlab/parallel.hpp"
#include "greenlab/reports.hpp"
#include "greenlab/rng.hpp"
#include "greenlab/stats.hpp"
#include "greenlab/system.hpp"

namespace greenlab {

// Per-point values Lambda^k f_j(x_i), k = 0..depth.
class LevelTable {
 public:
  LevelTable() = default;
  LevelTable(std::size_t points, std::size_t n_obs, int depth)
      : points_(points), n_obs_(n_obs), depth_(depth),
        v_(points * n_obs * static_cast<std::size_t>(depth + 1), 0.0) {}

  std::size_t points() const noexcept { return points_; }
  std::size_t n_obs() const noexcept { return n_obs_; }
  int depth() const noexcept { return depth_; }

  double& at(std::size_t i, std::size_t j, int k) noexcept { return v_[index(i, j, k)]; }
  double at(std::size_t i, std::size_t j, int k) const noexcept { return v_[index(i, j, k)]; }
  double* row(std::size_t i) noexcept { return &v_[index(i, 0, 0)]; }

 private:
  std::size_t index(std::size_t i, std::size_t j, int k) const noexcept {
    return (i * n_obs_ + j) * static_cast<std::size_t>(depth_ + 1) + static_cast<std::size_t>(k);
  }

  std::size_t points_ = 0;
  std::size_t n_obs_ = 0;
  int depth_ = 0;
  std::vector<double> v_;
};

namespace detail {

template <DynamicalSystem S, class F>
void tree_visit(const S& sys, const typename S::Point& node, int level, int depth,
                std::span<const F* const> obs, double* sums,
                std::vector<std::vector<typename S::Point>>& buf) {
  for (std::size_t j = 0; j < obs.size(); ++j) {
    sums[j * static_cast<std::size_t>(depth + 1) + static_cast<std::size_t>(level)] += (*obs[j])(node);
  }
  if (level == depth) return;
  auto& children = buf[static_cast<std::size_t>(level)];
  sys.preimages(node, children);
  for (const auto& child : children) tree_visit(sys, child, level + 1, depth, obs, sums, buf);
}

inline double sq(double x) noexcept { return x * x; }

}  // namespace detail

// Exact Lambda^k f_j(x) for k = 0..depth by enumerating the d^depth-leaf
// preimage tree once. out[j * (depth + 1) + k].
template <DynamicalSystem S, class F>
void tree_levels(const S& sys, const typename S::Point& x, std::span<const F* const> obs,
                 int depth, double* out) {
  const std::size_t stride = static_cast<std::size_t>(depth + 1);
  std::fill(out, out + obs.size() * stride, 0.0);
  std::vector<std::vector<typename S::Point>> buf(static_cast<std::size_t>(std::max(depth, 1)));
  detail::tree_visit(sys, x, 0, depth, obs, out, buf);
  double scale = 1.0;
  const double inv_d = 1.0 / sys.degree();
  for (int k = 0; k <= depth; ++k) {
    for (std::size_t j = 0; j < obs.size(); ++j) out[j * stride + static_cast<std::size_t>(k)] *= scale;
    scale *= inv_d;
  }
}

// Monte-Carlo Lambda^n f(x): mean of f over `paths` uniform backward paths.
template <DynamicalSystem S, class F>
Estimate mc_transfer(const S& sys, const typename S::Point& x, const F& f, int n, int paths,
                     Stream& rng) {
  std::vector<typename S::Point> scratch;
  MeanAccumulator acc;
  for (int p = 0; p < paths; ++p) acc.add(f(backward_walk(sys, x, n, rng, scratch)));
  return acc.estimate();
}

// Lambda^n f(x) under a budget: exact tree when n <= exact_depth_max.
template <DynamicalSystem S, class F>
TransferValue transfer_value(const S& sys, const F& f, const typename S::Point& x, int n,
                             const TransferBudget& budget, std::uint64_t stream_index = 0) {
  if (n < 0) throw Error(ErrorCode::InvalidParams, "transfer needs n >= 0");
  TransferValue out;
  if (n <= budget.exact_depth_max) {
    const F* list[] = {&f};
    std::vector<double> levels(static_cast<std::size_t>(n + 1));
    tree_levels(sys, x, std::span<const F* const>(list), n, levels.data());
    out.value = levels[static_cast<std::size_t>(n)];
    return out;
  }
  if (budget.mc_paths < 1) throw Error(ErrorCode::InvalidParams, "mc_paths must be >= 1");
  Stream rng(budget.seed, Purpose::transfer_paths, stream_index);
  const Estimate e = mc_transfer(sys, x, f, n, budget.mc_paths, rng);
  out.value = e.value;
  out.std_err = e.std_err;
  out.exact = false;
  return out;
}

// Level table over a cloud. Levels beyond the exact budget fall back to
// Monte-Carlo paths, one stream per (point, level).
template <DynamicalSystem S, class F>
LevelTable cloud_levels(const S& sys, std::span<const typename S::Point> cloud,
                        std::span<const F* const> obs, int depth, const TransferBudget& budget) {
  LevelTable table(cloud.size(), obs.size(), depth);
  const int exact = std::min(depth, budget.exact_depth_max);
  const std::size_t stride = static_cast<std::size_t>(depth + 1);
  parallel_for(cloud.size(), [&](std::size_t i) {
    double* row = table.row(i);
    std::vector<double> tmp(obs.size() * static_cast<std::size_t>(exact + 1));
    tree_levels(sys, cloud[i], obs, exact, tmp.data());
    for (std::size_t j = 0; j < obs.size(); ++j) {
      for (int k = 0; k <= exact; ++k) {
        row[j * stride + static_cast<std::size_t>(k)] =
            tmp[j * static_cast<std::size_t>(exact + 1) + static_cast<std::size_t>(k)];
      }
    }
    for (int k = exact + 1; k <= depth; ++k) {
      Stream rng(budget.seed, Purpose::transfer_paths,
                 static_cast<std::uint64_t>(i) * 1024u + static_cast<std::uint64_t>(k));
      std::vector<typename S::Point> scratch;
      std::vector<MeanAccumulator> acc(obs.size());
      for (int p = 0; p < budget.mc_paths; ++p) {
        const auto leaf = backward_walk(sys, cloud[i], k, rng, scratch);
        for (std::size_t j = 0; j < obs.size(); ++j) acc[j].add((*obs[j])(leaf));
      }
      for (std::size_t j = 0; j < obs.size(); ++j) row[j * stride + static_cast<std::size_t>(k)] = acc[j].mean();
    }
  });
  return table;
}

// <mu, f>: the exact hint when present, else the cloud mean of Lambda^L f at the
// deepest level L (same mean by total invariance, much smaller variance).
template <class F>
Estimate resolve_mean(const F& f, const LevelTable& t, std::size_t j) {
  if (const auto hint = f.mean_hint()) return {*hint, 0.0};
  MeanAccumulator acc;
  for (std::size_t i = 0; i < t.points(); ++i) acc.add(t.at(i, j, t.depth()));
  return acc.estimate();
}

// Random-backward-walk sample of mu: one independent orbit per point.
template <DynamicalSystem S>
std::vector<typename S::Point> sample_cloud(const S& sys, const typename S::Point& start,
                                            int n_samples, int burn_in, std::uint64_t seed,
                                            Purpose purpose = Purpose::sampler) {
  std::vector<typename S::Point> pts(static_cast<std::size_t>(n_samples));
  parallel_for(pts.size(), [&](std::size_t i) {
    Stream rng(seed, purpose, i);
    std::vector<typename S::Point> scratch;
    pts[i] = backward_walk(sys, start, burn_in, rng, scratch);
  });
  return pts;
}

struct OrbitParams {
  int n_orbits = 100000;
  int burn_in = 50;
  std::uint64_t seed = 0;
};

// Runs body(i, segment) for n_orbits mu-distributed segments of `length` points.
template <DynamicalSystem S, class Body>
void for_each_orbit(const S& sys, const typename S::Point& start, int length,
                    const OrbitParams& p, Body&& body) {
  if (p.n_orbits < 1) throw Error(ErrorCode::InvalidParams, "n_orbits must be >= 1");
  if (length < 1) throw Error(ErrorCode::InvalidParams, "orbit length must be >= 1");
  parallel_for(static_cast<std::size_t>(p.n_orbits), [&](std::size_t i) {
    Stream rng(p.seed, Purpose::orbits, i);
    std::vector<typename S::Point> seg, scratch;
    orbit_segment(sys, start, p.burn_in, length, rng, seg, scratch);
    body(i, std::span<const typename S::Point>(seg));
  });
}

template <DynamicalSystem S, class F>
GordinReport gordin_from_levels(const S& sys, const F& f, const LevelTable& t, std::size_t j,
                                int N) {
  (void)sys;
  GordinReport r;
  r.mean = resolve_mean(f, t, j);
  const double m = r.mean.value;
  double se2 = 0.0;
  std::vector<double> xs, ys, ws;
  for (int n = 0; n <= N; ++n) {
    MeanAccumulator acc;
    for (std::size_t i = 0; i < t.points(); ++i) acc.add(detail::sq(t.at(i, j, n) - m));
    const double norm2 = acc.mean();
    const double norm = std::sqrt(norm2);
    const double se = norm > 0.0 ? acc.std_err() / (2.0 * norm) : std::sqrt(acc.std_err());
    r.n.push_back(n);
    r.norm.push_back(norm);
    r.norm_stderr.push_back(se);
    r.partial_sum += norm;
    se2 += se * se;
    if (norm2 > 3.0 * acc.std_err() && norm > 0.0) {
      xs.push_back(n);
      ys.push_back(std::log(norm));
      ws.push_back(se > 0.0 ? detail::sq(norm / se) : 1e12);
    }
  }
  r.partial_sum_stderr = std::sqrt(se2);
  if (xs.size() >= 2) {
    const LineFit fit = fit_line(xs, ys, ws);
    r.decay_slope = fit.slope;
    r.decay_slope_halfwidth = kHalfWidthZ * fit.slope_se;
    r.decay_points = fit.points;
  }
  return r;
}

struct CorrelationParams {
  int n_max = 8;
  OrbitParams orbits;
  TransferBudget budget;
  bool forward = true;
};

// C_n = <mu, phi (psi o f^n)> - <phi><psi> = <mu, (Lambda^n phi) psi> - <phi><psi>,
// by the adjoint (exact tree, variance from the cloud only) and forward (orbit)
// estimators.
template <DynamicalSystem S, class F>
CorrelationReport correlation_series(const S& sys, std::span<const typename S::Point> cloud,
                                     const typename S::Point& start, const F& phi, const F& psi,
                                     const CorrelationParams& p) {
  if (p.n_max < 1) throw Error(ErrorCode::InvalidParams, "n_max must be >= 1");
  if (cloud.empty()) throw Error(ErrorCode::InvalidParams, "empty measure");
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const int n_adj = std::min(p.n_max, p.budget.exact_depth_max);
  const F* list[] = {&phi, &psi};
  const LevelTable t =
      cloud_levels(sys, cloud, std::span<const F* const>(list), std::max(n_adj, 0), p.budget);

  CorrelationReport r;
  r.mean_phi = resolve_mean(phi, t, 0);
  r.mean_psi = resolve_mean(psi, t, 1);
  const double mp = r.mean_phi.value, mq = r.mean_psi.value;

  double scale_phi = 0.0, scale_psi = 0.0;
  for (std::size_t i = 0; i < t.points(); ++i) {
    scale_phi = std::max(scale_phi, std::abs(t.at(i, 0, 0)));
    scale_psi = std::max(scale_psi, std::abs(t.at(i, 1, 0)));
  }
  const double floor = sys.numerical_floor() * std::max(scale_phi, 1.0) * std::max(scale_psi, 1.0);

  const std::size_t rows = static_cast<std::size_t>(p.n_max + 1);
  r.adjoint.assign(rows, nan);
  r.adjoint_stderr.assign(rows, nan);
  r.forward.assign(rows, nan);
  r.forward_stderr.assign(rows, nan);
  for (int n = 0; n <= n_adj; ++n) {
    MeanAccumulator acc;
    for (std::size_t i = 0; i < t.points(); ++i) acc.add((t.at(i, 0, n) - mp) * (t.at(i, 1, 0) - mq));
    r.adjoint[static_cast<std::size_t>(n)] = acc.mean();
    r.adjoint_stderr[static_cast<std::size_t>(n)] = std::hypot(acc.std_err(), floor);
  }
  if (p.forward || n_adj < p.n_max) {
    const std::size_t n_orb = static_cast<std::size_t>(p.orbits.n_orbits);
    std::vector<double> prod(n_orb * rows);
    for_each_orbit(sys, start, p.n_max + 1, p.orbits, [&](std::size_t i, auto seg) {
      const double a = phi(seg[0]) - mp;
      for (std::size_t n = 0; n < rows; ++n) prod[i * rows + n] = a * (psi(seg[n]) - mq);
    });
    for (std::size_t n = 0; n < rows; ++n) {
      MeanAccumulator acc;
      for (std::size_t i = 0; i < n_orb; ++i) acc.add(prod[i * rows + n]);
      r.forward[n] = acc.mean();
      r.forward_stderr[n] = acc.std_err();
    }
  }

  std::vector<double> xs, ys, ws;
  for (int n = 0; n <= p.n_max; ++n) {
    const std::size_t k = static_cast<std::size_t>(n);
    r.n_grid.push_back(n);
    const bool adj = n <= n_adj;
    r.method.emplace_back(adj ? "adjoint" : "forward");
    r.corr.push_back(adj ? r.adjoint[k] : r.forward[k]);
    r.corr_stderr.push_back(adj ? r.adjoint_stderr[k] : r.forward_stderr[k]);
    if (adj && !std::isnan(r.forward[k])) {
      const double comb = std::hypot(r.adjoint_stderr[k], r.forward_stderr[k]);
      r.agree.push_back(std::abs(r.adjoint[k] - r.forward[k]) <= 5.0 * comb);
    } else {
      r.agree.push_back(true);
    }
    const double c = r.corr.back(), se = r.corr_stderr.back();
    if (n >= 1 && std::abs(c) > 3.0 * se && c != 0.0) {
      xs.push_back(n);
      ys.push_back(std::log(std::abs(c)));
      ws.push_back(se > 0.0 ? detail::sq(c / se) : 1e12);
    }
  }
  const double log_d = std::log(static_cast<double>(sys.degree()));
  r.class_expected_rate = -std::min(phi.decay_exponent(), psi.decay_exponent()) * log_d;
  r.claim = xs.size() >= 3;
  if (r.claim) {
    const LineFit fit = fit_line(xs, ys, ws);
    r.fitted_rate = fit.slope;
    r.fitted_rate_halfwidth = kHalfWidthZ * fit.slope_se;
    r.fit_points = fit.points;
    r.rate_ok = fit.slope <= r.class_expected_rate + 0.2 * log_d;
  } else {
    r.fit_points = static_cast<int>(xs.size());
    r.rate_ok = true;
  }
  return r;
}

struct VarianceParams {
  int n_max = 8;
  std::vector<int> birkhoff_grid{8, 16, 32};
  OrbitParams orbits;
  TransferBudget budget;
  double expansion_c = 1.0;  // C in the C d^-n / n allowance
};

// sigma2 = c_0 + 2 sum c_n, gamma = 2 sum n c_n from the exact tree, plus an
// independent orbit estimate of ||S_n psi||^2 / n.
template <DynamicalSystem S, class F>
VarianceReport variance_sigma2(const S& sys, std::span<const typename S::Point> cloud,
                               const typename S::Point& start, const F& psi,
                               const VarianceParams& p) {
  if (p.n_max < 1) throw Error(ErrorCode::InvalidParams, "n_max must be >= 1");
  if (cloud.empty()) throw Error(ErrorCode::InvalidParams, "empty measure");
  const int depth = std::min(p.n_max, std::max(p.budget.exact_depth_max, 1));
  const F* list[] = {&psi};
  const LevelTable t = cloud_levels(sys, cloud, std::span<const F* const>(list), depth, p.budget);
  VarianceReport r;
  r.mean = resolve_mean(psi, t, 0);
  const double m = r.mean.value;

  double scale = 0.0;
  MeanAccumulator sig, gam;
  std::vector<MeanAccumulator> cn(static_cast<std::size_t>(depth + 1));
  for (std::size_t i = 0; i < t.points(); ++i) {
    const double u = t.at(i, 0, 0) - m;
    scale = std::max(scale, std::abs(u));
    double s = 0.0, g = 0.0;
    for (int n = 0; n <= depth; ++n) {
      const double a = u * (t.at(i, 0, n) - m);
      cn[static_cast<std::size_t>(n)].add(a);
      s += n == 0 ? a : 2.0 * a;
      g += 2.0 * n * a;
    }
    sig.add(s);
    gam.add(g);
  }
  const double floor = sys.numerical_floor() * std::max(scale * scale, 1.0);
  double partial = 0.0;
  for (int n = 0; n <= depth; ++n) {
    const auto& a = cn[static_cast<std::size_t>(n)];
    r.c.push_back(a.mean());
    r.c_stderr.push_back(std::hypot(a.std_err(), floor));
    partial += n == 0 ? a.mean() : 2.0 * a.mean();
    r.partial_sums.push_back(partial);
  }
  const double q = std::pow(static_cast<double>(sys.degree()), -psi.decay_exponent());
  const double c_last = std::abs(r.c.back()) + r.c_stderr.back();
  r.sigma2_truncation = 2.0 * c_last * q / (1.0 - q);
  r.gamma_truncation = 2.0 * c_last * (depth * q / (1.0 - q) + q / ((1.0 - q) * (1.0 - q)));
  r.sigma2 = std::max(0.0, sig.mean());
  r.sigma2_stderr = std::hypot(sig.std_err(), floor * (2 * depth + 1));
  r.gamma = gam.mean();
  r.gamma_stderr = std::hypot(gam.std_err(), floor * depth * (depth + 1));

  if (!p.birkhoff_grid.empty()) {
    const int len = *std::max_element(p.birkhoff_grid.begin(), p.birkhoff_grid.end());
    const std::size_t n_orb = static_cast<std::size_t>(p.orbits.n_orbits);
    const std::size_t g = p.birkhoff_grid.size();
    std::vector<double> vals(n_orb * g);
    for_each_orbit(sys, start, len, p.orbits, [&](std::size_t i, auto seg) {
      double s = 0.0;
      std::vector<double> prefix(static_cast<std::size_t>(len + 1), 0.0);
      for (int j = 0; j < len; ++j) {
        s += psi(seg[static_cast<std::size_t>(j)]) - m;
        prefix[static_cast<std::size_t>(j + 1)] = s;
      }
      for (std::size_t k = 0; k < g; ++k) {
        const int n = p.birkhoff_grid[k];
        vals[i * g + k] = detail::sq(prefix[static_cast<std::size_t>(n)]) / n;
      }
    });
    const double d = sys.degree();
    for (std::size_t k = 0; k < g; ++k) {
      const int n = p.birkhoff_grid[k];
      MeanAccumulator acc;
      for (std::size_t i = 0; i < n_orb; ++i) acc.add(vals[i * g + k]);
      BirkhoffCheck b;
      b.n = n;
      b.value = acc.mean();
      b.std_err = acc.std_err();
      b.predicted = r.sigma2 - r.gamma / n;
      b.residual = b.value - b.predicted;
      const double comb = std::sqrt(detail::sq(b.std_err) + detail::sq(r.sigma2_stderr) +
                                    detail::sq(r.gamma_stderr / n));
      b.allowed = 5.0 * comb + p.expansion_c * std::pow(d, -n) / n + r.sigma2_truncation +
                  r.gamma_truncation / n + n * detail::sq(3.0 * r.mean.std_err);
      b.ok = std::abs(b.residual) <= b.allowed;
      r.birkhoff_check.push_back(b);
    }
  }
  return r;
}

struct CltParams {
  int n = 1024;
  OrbitParams orbits;
  double coboundary_tol = 0.01;
  // Reference N(0, sigma) for KS and quantiles; the estimated sigma when unset.
  std::optional<double> reference_sigma;
};

// Distribution of S_n psi / sqrt(n) over mu-distributed starts against N(0, sigma).
// Throws CoboundaryDetected when sigma2 is indistinguishable from 0.
template <DynamicalSystem S, class F>
CltReport clt_test(const S& sys, const typename S::Point& start, const F& psi, double mean,
                   const VarianceReport& var, const CltParams& p) {
  if (p.orbits.n_orbits < 1) throw Error(ErrorCode::InvalidParams, "n_orbits must be >= 1");
  if (p.n < 1) throw Error(ErrorCode::InvalidParams, "clt n must be >= 1");
  const double threshold = std::max(p.coboundary_tol, 5.0 * var.sigma2_stderr);
  if (var.sigma2 <= threshold) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "sigma2 = %.3e <= %.3e: psi behaves as a coboundary",
                  var.sigma2, threshold);
    throw Error(ErrorCode::CoboundaryDetected, buf);
  }
  std::vector<double> z(static_cast<std::size_t>(p.orbits.n_orbits));
  const double root_n = std::sqrt(static_cast<double>(p.n));
  for_each_orbit(sys, start, p.n, p.orbits, [&](std::size_t i, auto seg) {
    double s = 0.0;
    for (const auto& x : seg) s += psi(x) - mean;
    z[i] = s / root_n;
  });
  CltReport r;
  r.n = p.n;
  r.n_orbits = p.orbits.n_orbits;
  r.sigma = p.reference_sigma ? *p.reference_sigma : std::sqrt(var.sigma2);
  MeanAccumulator acc;
  for (double v : z) acc.add(v);
  r.sample_mean = acc.mean();
  r.sample_variance = acc.variance();
  r.ks = ks_distance(z, [&](double x) { return normal_cdf(x, r.sigma); });
  for (double q : {0.01, 0.05, 0.25, 0.5, 0.75, 0.95, 0.99}) {
    r.quantiles.push_back({q, sorted_quantile(z, q), normal_quantile(q, r.sigma)});
  }
  return r;
}

struct LdtParams {
  double epsilon = 0.2;
  std::vector<int> n_grid{16, 32, 64};
  OrbitParams orbits;
};

inline double ldt_envelope(int n, double h) {
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  const double l = std::log(static_cast<double>(n));
  return std::exp(-n * h / (l * l));
}

// Largest h with tail_n <= exp(-n h / (log n)^2) on every n >= 2 with tail_n > 0.
inline bool fit_ldt_rate(std::span<const int> n_grid, std::span<const double> tail, double& h) {
  bool any = false;
  h = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n_grid.size(); ++k) {
    const int n = n_grid[k];
    if (n < 2 || !(tail[k] > 0.0)) continue;
    const double l = std::log(static_cast<double>(n));
    h = std::min(h, -std::log(tail[k]) * l * l / n);
    any = true;
  }
  if (!any) h = 0.0;
  return any;
}

template <DynamicalSystem S, class F>
LdtReport ldt_tail(const S& sys, const typename S::Point& start, const F& psi, double mean,
                   const LdtParams& p) {
  if (!(p.epsilon > 0.0)) throw Error(ErrorCode::InvalidParams, "epsilon must be > 0");
  if (p.n_grid.empty()) throw Error(ErrorCode::InvalidParams, "empty ldt n grid");
  for (int n : p.n_grid) {
    if (n < 1) throw Error(ErrorCode::InvalidParams, "ldt n must be >= 1");
  }
  const int len = *std::max_element(p.n_grid.begin(), p.n_grid.end());
  const std::size_t n_orb = static_cast<std::size_t>(p.orbits.n_orbits);
  const std::size_t g = p.n_grid.size();
  std::vector<double> dev(n_orb * g);
  std::vector<double> sup(n_orb, 0.0);
  for_each_orbit(sys, start, len, p.orbits, [&](std::size_t i, auto seg) {
    std::vector<double> prefix(static_cast<std::size_t>(len + 1), 0.0);
    double s = 0.0, mx = 0.0;
    for (int j = 0; j < len; ++j) {
      const double v = psi(seg[static_cast<std::size_t>(j)]) - mean;
      mx = std::max(mx, std::abs(v));
      s += v;
      prefix[static_cast<std::size_t>(j + 1)] = s;
    }
    for (std::size_t k = 0; k < g; ++k) {
      const int n = p.n_grid[k];
      dev[i * g + k] = std::abs(prefix[static_cast<std::size_t>(n)] / n);
    }
    sup[i] = mx;
  });
  LdtReport r;
  r.epsilon = p.epsilon;
  r.n_grid = p.n_grid;
  double sup_all = 0.0;
  for (double v : sup) sup_all = std::max(sup_all, v);
  r.control_epsilon = 2.0 * sup_all + 1e-12;
  for (std::size_t k = 0; k < g; ++k) {
    std::size_t hits = 0, control = 0;
    for (std::size_t i = 0; i < n_orb; ++i) {
      hits += dev[i * g + k] > p.epsilon;
      control += dev[i * g + k] > r.control_epsilon;
    }
    const double t = static_cast<double>(hits) / n_orb;
    r.tail.push_back(t);
    r.tail_stderr.push_back(std::sqrt(t * (1.0 - t) / n_orb));
    r.control_tail.push_back(static_cast<double>(control) / n_orb);
    r.control_ok = r.control_ok && control == 0;
  }
  r.h_fitted = fit_ldt_rate(r.n_grid, r.tail, r.h_eps_hat);
  for (std::size_t k = 0; k < g; ++k) {
    const int n = r.n_grid[k];
    r.envelope.push_back(ldt_envelope(n, r.h_eps_hat));
    r.envelope_ok.push_back(n < 2 || !r.h_fitted || r.tail[k] <= r.envelope.back() * (1.0 + 1e-12));
  }
  return r;
}

// <mu, psi0 (psi1 o f^n1)(psi2 o f^n2)> - prod <mu, psi_i> over orbit segments.
template <DynamicalSystem S, class F>
HigherOrderReport higher_order_correlation(const S& sys, const typename S::Point& start,
                                           const F& psi0, const F& psi1, const F& psi2,
                                           const double (&means)[3], int n1, int n2,
                                           const OrbitParams& p) {
  if (n1 < 0 || n2 < n1) throw Error(ErrorCode::InvalidParams, "need 0 <= n1 <= n2");
  std::vector<double> v(static_cast<std::size_t>(p.n_orbits));
  for_each_orbit(sys, start, n2 + 1, p, [&](std::size_t i, auto seg) {
    v[i] = psi0(seg[0]) * psi1(seg[static_cast<std::size_t>(n1)]) *
           psi2(seg[static_cast<std::size_t>(n2)]);
  });
  const Estimate e = mean_estimate(v);
  HigherOrderReport r;
  r.n1 = n1;
  r.n2 = n2;
  r.gap = std::min(n1, n2 - n1);
  r.value = e.value - means[0] * means[1] * means[2];
  r.std_err = e.std_err;
  return r;
}

}  // namespace greenlab
