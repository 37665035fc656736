#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace greenlab {

struct Estimate {
  double value = 0.0;
  double std_err = 0.0;
};

// Weighted running mean/variance (West's update). Constant inputs reproduce the
// constant exactly, which keeps degenerate cases (constant observables) at 0.
class MeanAccumulator {
 public:
  void add(double x, double w = 1.0) noexcept;

  std::size_t count() const noexcept { return count_; }
  double mean() const noexcept { return mean_; }
  double weight() const noexcept { return weight_; }
  // Weighted population variance.
  double variance() const noexcept;
  // Standard error of the weighted mean, using the effective sample size.
  double std_err() const noexcept;
  Estimate estimate() const noexcept { return {mean(), std_err()}; }

 private:
  std::size_t count_ = 0;
  double weight_ = 0.0;
  double weight_sq_ = 0.0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

Estimate mean_estimate(std::span<const double> xs);

// y = intercept + slope * x by weighted least squares. Standard errors are
// inflated by sqrt(chi2/(k-2)) when the residuals are overdispersed.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
  double intercept_se = 0.0;
  double chi2 = 0.0;
  int points = 0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y,
                 std::span<const double> weights);

// Two-sided 95% normal quantile used for reported half-widths.
inline constexpr double kHalfWidthZ = 1.959963984540054;

double normal_cdf(double x, double sigma) noexcept;
double normal_quantile(double p, double sigma);

// Kolmogorov-Smirnov distance between the empirical law of `samples` and a
// continuous CDF. `samples` is sorted in place.
template <class Cdf>
double ks_distance(std::vector<double>& samples, Cdf&& cdf);

double ks_distance_normal(std::vector<double> samples, double sigma);
double ks_distance_uniform(std::vector<double> samples, double lo, double hi);

// Empirical quantile (linear interpolation) of sorted data.
double sorted_quantile(std::span<const double> sorted, double p);

}  // namespace greenlab

#include <algorithm>
#include <cmath>

namespace greenlab {

template <class Cdf>
double ks_distance(std::vector<double>& samples, Cdf&& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max(d, std::max(static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n));
  }
  return d;
}

}  // namespace greenlab
