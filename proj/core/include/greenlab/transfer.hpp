#pragma once

#include <optional>

#include "greenlab/measure.hpp"
#include "greenlab/observable.hpp"
#include "greenlab/rational_map.hpp"
#include "greenlab/reports.hpp"

namespace greenlab {

// Lambda^n obs(p) = d^-n sum over the d^n preimages (with multiplicity).
// Exact tree when n <= budget.exact_depth_max, Monte-Carlo paths otherwise.
TransferValue transfer(const RationalMap& f, const Observable& obs, const SpherePoint& p, int n,
                       const TransferBudget& budget = {});

// ||Lambda^n (obs - mean)||_{L2(mu)} for n = 0..N.
GordinReport gordin_sequence(const RationalMap& f, const EmpiricalMeasure& mu,
                             const Observable& obs, int N, const TransferBudget& budget = {});

struct DecomposeParams {
  double tol = 1e-6;
  TransferBudget budget;
  // Cloud points used for the L2 norms that choose N.
  int max_points = 2000;
  // Fixes N instead of choosing it (N = 0 gives psi'' = 0).
  std::optional<int> force_N;
};

// psi'' = -sum_{n=1}^N (Lambda^n psi - m), psi' = (psi - m) - psi'' + psi'' o f.
struct MartingaleDecomposition {
  Observable psi_prime;
  Observable psi_dblprime;
  int truncation_N = 0;
  double tail_bound = 0.0;
  Estimate mean;
  std::vector<double> norms;  // ||Lambda^n psi - m|| used to pick N
};

// Throws NoDecayDetected when the L2 norms fail to shrink by 0.9 per step over
// the last 5 steps without reaching tol.
MartingaleDecomposition martingale_decompose(const RationalMap& f, const Observable& obs,
                                             const EmpiricalMeasure& mu,
                                             const DecomposeParams& params = {});

struct MartingaleCheckParams {
  double tol = 1e-6;
  int max_points = 2000;
  int n_orbits = 20000;
  int burn_in = 50;
  std::uint64_t seed = 0;
};

// ||Lambda psi'|| on the cloud and <(psi' o f^a)(psi' o f^b)> for
// (a, b) in {(0,1), (0,2), (1,2)}; each must be <= max(tol, 5 stderr).
MartingaleCheck check_martingale(const RationalMap& f, const EmpiricalMeasure& mu,
                                 const MartingaleDecomposition& dec,
                                 const MartingaleCheckParams& params = {});

struct ReconstructionCheck {
  int points = 0;
  double max_error = 0.0;
  double tail_bound = 0.0;
  bool ok = false;
};

// psi' + psi''_ref - psi''_ref o f against psi - m at `points` cloud points,
// with psi''_ref rebuilt from independent transfer() calls.
ReconstructionCheck check_reconstruction(const RationalMap& f, const Observable& obs,
                                         const EmpiricalMeasure& mu,
                                         const MartingaleDecomposition& dec, int points = 100,
                                         const TransferBudget& budget = {});

// <mu, exp(alpha d^n |Lambda^n (obs - m)|)>.
ExpMomentReport exp_moment_transfer(const RationalMap& f, const EmpiricalMeasure& mu,
                                    const Observable& obs, double alpha, int n,
                                    const TransferBudget& budget = {});

}  // namespace greenlab
