#include "greenlab/stats.hpp"

#include <boost/math/distributions/normal.hpp>

#include "greenlab/error.hpp"

namespace greenlab {

void MeanAccumulator::add(double x, double w) noexcept {
  if (w <= 0.0) return;
  ++count_;
  weight_ += w;
  weight_sq_ += w * w;
  const double delta = x - mean_;
  mean_ += (w / weight_) * delta;
  m2_ += w * delta * (x - mean_);
}

double MeanAccumulator::variance() const noexcept {
  return weight_ > 0.0 ? m2_ / weight_ : 0.0;
}

double MeanAccumulator::std_err() const noexcept {
  if (count_ < 2 || weight_ <= 0.0) return 0.0;
  const double n_eff = weight_ * weight_ / weight_sq_;
  if (n_eff <= 1.0) return 0.0;
  return std::sqrt(variance() / (n_eff - 1.0));
}

Estimate mean_estimate(std::span<const double> xs) {
  MeanAccumulator acc;
  for (double x : xs) acc.add(x);
  return acc.estimate();
}

LineFit fit_line(std::span<const double> x, std::span<const double> y,
                 std::span<const double> weights) {
  LineFit fit;
  const std::size_t k = x.size();
  fit.points = static_cast<int>(k);
  if (k < 2) return fit;
  double sw = 0, sx = 0, sy = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const double w = weights.empty() ? 1.0 : weights[i];
    sw += w;
    sx += w * x[i];
    sy += w * y[i];
  }
  const double xbar = sx / sw, ybar = sy / sw;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const double w = weights.empty() ? 1.0 : weights[i];
    sxx += w * (x[i] - xbar) * (x[i] - xbar);
    sxy += w * (x[i] - xbar) * (y[i] - ybar);
  }
  if (sxx <= 0.0) return fit;
  fit.slope = sxy / sxx;
  fit.intercept = ybar - fit.slope * xbar;
  for (std::size_t i = 0; i < k; ++i) {
    const double w = weights.empty() ? 1.0 : weights[i];
    const double r = y[i] - fit.intercept - fit.slope * x[i];
    fit.chi2 += w * r * r;
  }
  // Unweighted fits have no variance model; use the residual variance.
  double scale = 1.0;
  if (weights.empty()) {
    scale = k > 2 ? fit.chi2 / static_cast<double>(k - 2) : 0.0;
  } else if (k > 2) {
    scale = std::max(1.0, fit.chi2 / static_cast<double>(k - 2));
  }
  fit.slope_se = std::sqrt(scale / sxx);
  fit.intercept_se = std::sqrt(scale * (1.0 / sw + xbar * xbar / sxx));
  return fit;
}

double normal_cdf(double x, double sigma) noexcept {
  return 0.5 * std::erfc(-x / (sigma * std::sqrt(2.0)));
}

double normal_quantile(double p, double sigma) {
  if (!(p > 0.0 && p < 1.0) || !(sigma > 0.0)) {
    throw Error(ErrorCode::InvalidParams, "normal_quantile needs p in (0,1) and sigma > 0");
  }
  return boost::math::quantile(boost::math::normal_distribution<double>(0.0, sigma), p);
}

double ks_distance_normal(std::vector<double> samples, double sigma) {
  return ks_distance(samples, [sigma](double x) { return normal_cdf(x, sigma); });
}

double ks_distance_uniform(std::vector<double> samples, double lo, double hi) {
  return ks_distance(samples, [lo, hi](double x) {
    return std::clamp((x - lo) / (hi - lo), 0.0, 1.0);
  });
}

double sorted_quantile(std::span<const double> sorted, double p) {
  if (sorted.empty()) return 0.0;
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto i = static_cast<std::size_t>(pos);
  if (i + 1 >= sorted.size()) return sorted.back();
  const double t = pos - static_cast<double>(i);
  return sorted[i] * (1.0 - t) + sorted[i + 1] * t;
}

}  // namespace greenlab
