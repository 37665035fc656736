#pragma once

#include "greenlab/estimators.hpp"
#include "greenlab/measure.hpp"
#include "greenlab/observable.hpp"
#include "greenlab/rational_map.hpp"

namespace greenlab {

// S_n obs(p) = sum_{j<n} obs(f^j p) by forward iteration; S_0 = 0.
double birkhoff_sum(const RationalMap& f, const Observable& obs, const SpherePoint& p, int n);

// Orbit segments start their backward walks at the measure's sampler start.
CorrelationReport correlation_series(const RationalMap& f, const EmpiricalMeasure& mu,
                                     const Observable& phi, const Observable& psi,
                                     const CorrelationParams& params = {});

VarianceReport variance_sigma2(const RationalMap& f, const EmpiricalMeasure& mu,
                               const Observable& psi, const VarianceParams& params = {});

CltReport clt_test(const RationalMap& f, const EmpiricalMeasure& mu, const Observable& psi,
                   const VarianceReport& variance, const CltParams& params = {});
// Computes sigma2 from the exact tree first (no Birkhoff grid).
CltReport clt_test(const RationalMap& f, const EmpiricalMeasure& mu, const Observable& psi,
                   int n, int n_orbits, std::uint64_t seed);

HigherOrderReport higher_order_correlation(const RationalMap& f, const EmpiricalMeasure& mu,
                                           const Observable& psi0, const Observable& psi1,
                                           const Observable& psi2, int n1, int n2,
                                           const OrbitParams& params = {});

LdtReport ldt_tail(const RationalMap& f, const EmpiricalMeasure& mu, const Observable& psi,
                   const LdtParams& params = {});

// <mu, obs>: the hint when present, else the cloud mean of Lambda^L obs.
Estimate observable_mean(const RationalMap& f, const EmpiricalMeasure& mu, const Observable& obs,
                         int depth = 8);

}  // namespace greenlab
