#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "greenlab/observable.hpp"
#include "greenlab/rational_map.hpp"
#include "greenlab/reports.hpp"

namespace greenlab {

struct MeasureMeta {
  std::uint64_t seed = 0;
  int burn_in = 0;
  int n_samples = 0;
  std::string map_fingerprint;
  SpherePoint start;
};

// Weighted point cloud; weights sum to 1.
struct EmpiricalMeasure {
  std::vector<SpherePoint> points;
  std::vector<double> weights;
  MeasureMeta meta;

  std::size_t size() const noexcept { return points.size(); }
  bool uniform() const noexcept;

  // Normalizes `weights` (empty means uniform).
  static EmpiricalMeasure from_points(std::vector<SpherePoint> points,
                                      std::vector<double> weights = {});
};

inline SpherePoint default_start() { return SpherePoint::from_z({2.0, 1.0}); }

struct SamplerParams {
  int n_samples = 100000;
  int burn_in = 50;
  std::uint64_t seed = 0;
  SpherePoint start = default_start();
};

// Throws ExceptionalStart when the distinct backward images of `start` stay at
// <= 2 points for 3 consecutive steps (a totally invariant finite set).
void check_start(const RationalMap& f, const SpherePoint& start);

// Endpoints of independent uniform backward walks of length burn_in from a
// fixed start, weights 1/n.
EmpiricalMeasure sample_equilibrium(const RationalMap& f, const SamplerParams& params);
EmpiricalMeasure sample_equilibrium(const RationalMap& f, int n_samples, int burn_in,
                                    std::uint64_t seed);

struct Integral {
  double value = 0.0;
  double std_err = 0.0;
  std::size_t rejected = 0;  // non-finite or clamped evaluations
};

// Weighted mean over the finite evaluations. Throws TooManySingularHits when
// more than 0.1% of the evaluations are rejected.
Integral integrate(const EmpiricalMeasure& mu, const Observable& obs);

struct GreenValue {
  double potential = 0.0;  // sum_j d^-(j+1) log |F(Z_j)| over unit lifts
  double affine = 0.0;     // potential + log |(z, 1)|; log+|z| for z^d
  double tail_bound = 0.0; // bound on the dropped terms j >= n_iter
  std::vector<double> increments;
};

GreenValue green_function(const RationalMap& f, const SpherePoint& p, int n_iter);

// <mu, exp(alpha |obs|)> with the 5 largest contributions.
ExpMomentReport exp_moment(const EmpiricalMeasure& mu, const Observable& obs, double alpha);

// Uniform samples of a Euclidean disc (a synthetic area measure).
EmpiricalMeasure uniform_disc(Complex center, double radius, int n, std::uint64_t seed);

// Mean chordal distance from the cloud to the unit circle.
double mean_distance_to_unit_circle(const EmpiricalMeasure& mu);

}  // namespace greenlab
