#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "greenlab/stats.hpp"

namespace greenlab {

struct TransferBudget {
  int exact_depth_max = 12;  // full d^n-leaf trees up to this depth
  int mc_paths = 10000;      // random backward paths beyond it
  std::uint64_t seed = 0;
};

struct TransferValue {
  double value = 0.0;
  double std_err = 0.0;
  bool exact = true;
  std::size_t singular_hits = 0;
};

struct GordinReport {
  std::vector<int> n;
  std::vector<double> norm;
  std::vector<double> norm_stderr;
  double partial_sum = 0.0;
  double partial_sum_stderr = 0.0;
  Estimate mean;
  // log norm against n over the terms that clear 3 standard errors.
  double decay_slope = 0.0;
  double decay_slope_halfwidth = 0.0;
  int decay_points = 0;
};

struct CorrelationReport {
  std::vector<int> n_grid;
  std::vector<double> corr;
  std::vector<double> corr_stderr;
  std::vector<std::string> method;  // "adjoint" or "forward"
  std::vector<double> adjoint;      // NaN where not computed
  std::vector<double> adjoint_stderr;
  std::vector<double> forward;
  std::vector<double> forward_stderr;
  std::vector<bool> agree;          // |forward - adjoint| <= 5 combined stderr
  Estimate mean_phi;
  Estimate mean_psi;
  bool claim = false;               // >= 3 points survived the 3-stderr filter
  double fitted_rate = 0.0;
  double fitted_rate_halfwidth = 0.0;
  int fit_points = 0;
  double class_expected_rate = 0.0;
  bool rate_ok = true;
};

struct BirkhoffCheck {
  int n = 0;
  double value = 0.0;     // ||S_n psi||^2 / n by Monte Carlo over orbits
  double std_err = 0.0;
  double predicted = 0.0; // sigma2 - gamma / n
  double residual = 0.0;
  double allowed = 0.0;
  bool ok = false;
};

struct VarianceReport {
  Estimate mean;
  std::vector<double> c;          // c_n = <psi, Lambda^n psi>, centered
  std::vector<double> c_stderr;
  std::vector<double> partial_sums;  // sigma2 truncated after n
  double sigma2 = 0.0;
  double sigma2_stderr = 0.0;
  double gamma = 0.0;
  double gamma_stderr = 0.0;
  double sigma2_truncation = 0.0;
  double gamma_truncation = 0.0;
  std::vector<BirkhoffCheck> birkhoff_check;
};

struct QuantileRow {
  double p = 0.0;
  double empirical = 0.0;
  double gaussian = 0.0;
};

struct CltReport {
  int n = 0;
  int n_orbits = 0;
  double sigma = 0.0;
  double ks = 0.0;
  double sample_mean = 0.0;
  double sample_variance = 0.0;
  std::vector<QuantileRow> quantiles;
};

struct LdtReport {
  double epsilon = 0.0;
  std::vector<int> n_grid;
  std::vector<double> tail;
  std::vector<double> tail_stderr;
  double h_eps_hat = 0.0;       // 0 when no n >= 2 has a positive tail
  bool h_fitted = false;
  std::vector<double> envelope; // exp(-n h / (log n)^2); NaN at n = 1
  std::vector<bool> envelope_ok;
  double control_epsilon = 0.0;
  std::vector<double> control_tail;
  bool control_ok = true;
};

struct HigherOrderReport {
  int n1 = 0;
  int n2 = 0;
  int gap = 0;
  double value = 0.0;
  double std_err = 0.0;
};

struct ModerateReport {
  std::vector<double> m_grid;
  std::vector<double> tail;
  std::vector<double> tail_stderr;
  double alpha_hat = 0.0;
  double alpha_halfwidth = 0.0;
  double c_hat = 0.0;
  std::pair<int, int> fit_window{-1, -1};  // inclusive index range
  bool degenerate = false;
};

struct BallMassReport {
  std::vector<double> radii;
  std::vector<double> mass;
  std::vector<double> mass_stderr;
  std::vector<int> hits;
  double alpha_hat = 0.0;
  double alpha_halfwidth = 0.0;
  std::pair<int, int> fit_window{-1, -1};
  double nearest_sample = 0.0;
  bool degenerate = false;
};

struct ExpMomentReport {
  double value = 0.0;
  double std_err = 0.0;
  std::size_t non_finite = 0;
  bool flagged = false;
  std::vector<std::pair<std::size_t, double>> top;  // (sample index, contribution)
};

struct MartingaleCheck {
  double lambda_norm = 0.0;  // ||Lambda psi'||_{L2(mu)}
  double lambda_norm_stderr = 0.0;
  bool lambda_ok = false;
  struct Pair {
    int a = 0;
    int b = 0;
    double value = 0.0;
    double std_err = 0.0;
    bool ok = false;
  };
  std::vector<Pair> orthogonality;
  double tol = 0.0;
  bool ok = false;
};

}  // namespace greenlab
