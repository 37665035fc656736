#include "greenlab/lab.hpp"

#include "greenlab/error.hpp"
#include "greenlab/system.hpp"

namespace greenlab {

namespace {

std::span<const SpherePoint> cloud_of(const EmpiricalMeasure& mu) {
  if (mu.size() == 0) throw Error(ErrorCode::InvalidParams, "empty measure");
  if (!mu.uniform()) {
    throw Error(ErrorCode::InvalidParams, "cloud estimators need a uniformly weighted measure");
  }
  return {mu.points.data(), mu.points.size()};
}

}  // namespace

double birkhoff_sum(const RationalMap& f, const Observable& obs, const SpherePoint& p, int n) {
  if (n < 0) throw Error(ErrorCode::InvalidParams, "birkhoff_sum needs n >= 0");
  double s = 0.0;
  SpherePoint x = p;
  for (int j = 0; j < n; ++j) {
    s += obs(x);
    x = f.apply(x);
  }
  return s;
}

CorrelationReport correlation_series(const RationalMap& f, const EmpiricalMeasure& mu,
                                     const Observable& phi, const Observable& psi,
                                     const CorrelationParams& params) {
  const SphereSystem sys(f);
  return correlation_series(sys, cloud_of(mu), mu.meta.start, phi, psi, params);
}

VarianceReport variance_sigma2(const RationalMap& f, const EmpiricalMeasure& mu,
                               const Observable& psi, const VarianceParams& params) {
  const SphereSystem sys(f);
  return variance_sigma2(sys, cloud_of(mu), mu.meta.start, psi, params);
}

CltReport clt_test(const RationalMap& f, const EmpiricalMeasure& mu, const Observable& psi,
                   const VarianceReport& variance, const CltParams& params) {
  const SphereSystem sys(f);
  return clt_test(sys, mu.meta.start, psi, variance.mean.value, variance, params);
}

CltReport clt_test(const RationalMap& f, const EmpiricalMeasure& mu, const Observable& psi,
                   int n, int n_orbits, std::uint64_t seed) {
  if (n_orbits < 1) throw Error(ErrorCode::InvalidParams, "n_orbits must be >= 1");
  VarianceParams vp;
  vp.birkhoff_grid.clear();
  vp.budget.seed = seed;
  const VarianceReport var = variance_sigma2(f, mu, psi, vp);
  CltParams cp;
  cp.n = n;
  cp.orbits.n_orbits = n_orbits;
  cp.orbits.burn_in = mu.meta.burn_in > 0 ? mu.meta.burn_in : 50;
  cp.orbits.seed = seed;
  return clt_test(f, mu, psi, var, cp);
}

Estimate observable_mean(const RationalMap& f, const EmpiricalMeasure& mu, const Observable& obs,
                         int depth) {
  if (const auto hint = obs.mean_hint()) return {*hint, 0.0};
  const SphereSystem sys(f);
  const Observable* list[] = {&obs};
  TransferBudget budget;
  budget.exact_depth_max = depth;
  const LevelTable t = cloud_levels(sys, cloud_of(mu), std::span<const Observable* const>(list),
                                    depth, budget);
  return resolve_mean(obs, t, 0);
}

HigherOrderReport higher_order_correlation(const RationalMap& f, const EmpiricalMeasure& mu,
                                           const Observable& psi0, const Observable& psi1,
                                           const Observable& psi2, int n1, int n2,
                                           const OrbitParams& params) {
  const SphereSystem sys(f);
  const double means[3] = {observable_mean(f, mu, psi0).value, observable_mean(f, mu, psi1).value,
                           observable_mean(f, mu, psi2).value};
  return higher_order_correlation(sys, mu.meta.start, psi0, psi1, psi2, means, n1, n2, params);
}

LdtReport ldt_tail(const RationalMap& f, const EmpiricalMeasure& mu, const Observable& psi,
                   const LdtParams& params) {
  if (!psi.bounded()) throw Error(ErrorCode::InvalidParams, "ldt_tail needs a bounded observable");
  const SphereSystem sys(f);
  const double m = observable_mean(f, mu, psi).value;
  return ldt_tail(sys, mu.meta.start, psi, m, params);
}

}  // namespace greenlab
