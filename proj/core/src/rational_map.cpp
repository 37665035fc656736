#include "greenlab/rational_map.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstdio>

#include "greenlab/error.hpp"

namespace greenlab {

namespace {

int trimmed_degree(const std::vector<Complex>& c) {
  int d = static_cast<int>(c.size()) - 1;
  while (d >= 0 && c[static_cast<std::size_t>(d)] == Complex{}) --d;
  return d;
}

// Homogeneous resultant of two binary forms of degree d, relative to the
// Hadamard bound of the Sylvester matrix.
double relative_resultant(const std::vector<Complex>& p, const std::vector<Complex>& q, int d) {
  const int n = 2 * d;
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(n, n);
  for (int r = 0; r < d; ++r) {
    for (int k = 0; k <= d; ++k) {
      s(r, r + k) = p[static_cast<std::size_t>(d - k)];
      s(d + r, r + k) = q[static_cast<std::size_t>(d - k)];
    }
  }
  double np = 0, nq = 0;
  for (int k = 0; k <= d; ++k) {
    np += std::norm(p[static_cast<std::size_t>(k)]);
    nq += std::norm(q[static_cast<std::size_t>(k)]);
  }
  const double bound = std::pow(std::sqrt(np), d) * std::pow(std::sqrt(nq), d);
  if (bound == 0.0) return 0.0;
  const Complex det = s.partialPivLu().determinant();
  return std::abs(det) / bound;
}

// h evaluated in the chart of `root`, plus the matching absolute-value sum.
struct ChartEval {
  Complex value;
  Complex derivative;
  double magnitude;
};

ChartEval eval_in_chart(std::span<const Complex> c, const SpherePoint& root) {
  const int d = static_cast<int>(c.size()) - 1;
  const Complex x = root.coord();
  const double ax = std::abs(x);
  Complex v{}, dv{};
  double m = 0.0;
  if (root.chart() == Chart::z) {
    for (int k = d; k >= 0; --k) {
      dv = dv * x + v;
      v = v * x + c[static_cast<std::size_t>(k)];
      m = m * ax + std::abs(c[static_cast<std::size_t>(k)]);
    }
  } else {
    // g(w) = sum_k c_k w^(d-k)
    for (int k = 0; k <= d; ++k) {
      dv = dv * x + v;
      v = v * x + c[static_cast<std::size_t>(k)];
      m = m * ax + std::abs(c[static_cast<std::size_t>(k)]);
    }
  }
  return {v, dv, m};
}

SpherePoint polish(std::span<const Complex> c, SpherePoint root) {
  double best = poly::backward_residual(c, root);
  for (int it = 0; it < 4 && best > 0.0; ++it) {
    const ChartEval e = eval_in_chart(c, root);
    if (e.derivative == Complex{}) break;
    const SpherePoint next =
        SpherePoint::in_chart(root.coord() - e.value / e.derivative, root.chart()).canonical();
    const double r = poly::backward_residual(c, next);
    if (!(r < best)) break;
    best = r;
    root = next;
  }
  return root;
}

void solve_quadratic(Complex c0, Complex c1, Complex c2, std::vector<SpherePoint>& roots) {
  const Complex disc = std::sqrt(c1 * c1 - 4.0 * c2 * c0);
  const double sgn = (std::conj(c1) * disc).real() >= 0.0 ? 1.0 : -1.0;
  const Complex q = -0.5 * (c1 + sgn * disc);
  if (q == Complex{}) {
    roots.push_back(SpherePoint::from_z({0.0, 0.0}));
    roots.push_back(SpherePoint::from_z({0.0, 0.0}));
    return;
  }
  roots.push_back(SpherePoint::from_homogeneous(q, c2));
  roots.push_back(SpherePoint::from_homogeneous(c0, q));
}

void solve_companion(std::span<const Complex> c, int m, std::vector<SpherePoint>& roots) {
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(m, m);
  const Complex lead = c[static_cast<std::size_t>(m)];
  for (int i = 1; i < m; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < m; ++i) comp(i, m - 1) = -c[static_cast<std::size_t>(i)] / lead;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(comp, false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::RootFindingFailed, "companion eigenvalue iteration did not converge");
  }
  for (int i = 0; i < m; ++i) roots.push_back(SpherePoint::from_z(solver.eigenvalues()[i]));
}

}  // namespace

namespace poly {

double backward_residual(std::span<const Complex> coeffs, const SpherePoint& root) {
  const ChartEval e = eval_in_chart(coeffs, root);
  return e.magnitude > 0.0 ? std::abs(e.value) / e.magnitude : 0.0;
}

void solve(std::span<const Complex> coeffs, std::vector<SpherePoint>& roots, double tol) {
  roots.clear();
  const int d = static_cast<int>(coeffs.size()) - 1;
  int m = d;
  while (m >= 0 && coeffs[static_cast<std::size_t>(m)] == Complex{}) --m;
  if (m < 0) throw Error(ErrorCode::RootFindingFailed, "zero polynomial has no isolated roots");

  const std::size_t first = roots.size();
  if (m == 1) {
    roots.push_back(SpherePoint::from_homogeneous(-coeffs[0], coeffs[1]));
  } else if (m == 2) {
    solve_quadratic(coeffs[0], coeffs[1], coeffs[2], roots);
  } else if (m >= 3) {
    solve_companion(coeffs, m, roots);
    for (std::size_t i = first; i < roots.size(); ++i) roots[i] = polish(coeffs, roots[i]);
  }
  for (int k = m; k < d; ++k) roots.push_back(SpherePoint::infinity());

  for (const auto& r : roots) {
    const double res = backward_residual(coeffs, r);
    if (!(res <= tol)) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "backward residual %.3e exceeds %.1e", res, tol);
      throw Error(ErrorCode::RootFindingFailed, buf);
    }
  }
}

}  // namespace poly

RationalMap make_rational_map(std::vector<Complex> numer, std::vector<Complex> denom) {
  const int dn = trimmed_degree(numer);
  const int dd = trimmed_degree(denom);
  if (dd < 0) throw Error(ErrorCode::DegenerateMap, "denominator is the zero polynomial");
  if (dn < 0) throw Error(ErrorCode::DegreeTooLow, "numerator is the zero polynomial");
  const int d = std::max(dn, dd);
  if (d < 2) {
    throw Error(ErrorCode::DegreeTooLow, "degree " + std::to_string(d) + " < 2");
  }
  numer.resize(static_cast<std::size_t>(d + 1));
  denom.resize(static_cast<std::size_t>(d + 1));
  const double ratio = relative_resultant(numer, denom, d);
  if (!(ratio > 1e-10)) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "relative resultant %.3e: numer and denom share a root", ratio);
    throw Error(ErrorCode::DegenerateMap, buf);
  }
  RationalMap f;
  f.degree_ = d;
  f.numer_ = std::move(numer);
  f.denom_ = std::move(denom);
  f.resultant_ratio_ = ratio;
  return f;
}

std::pair<Complex, Complex> RationalMap::apply_lift(Complex a, Complex b) const noexcept {
  Complex p = numer_.back();
  Complex q = denom_.back();
  Complex bpow = 1.0;
  for (int k = degree_ - 1; k >= 0; --k) {
    bpow *= b;
    p = p * a + numer_[static_cast<std::size_t>(k)] * bpow;
    q = q * a + denom_[static_cast<std::size_t>(k)] * bpow;
  }
  return {p, q};
}

SpherePoint RationalMap::apply(const SpherePoint& x) const noexcept {
  const auto [a, b] = x.lift();
  const auto [p, q] = apply_lift(a, b);
  return SpherePoint::from_homogeneous(p, q);
}

SpherePoint RationalMap::iterate(const SpherePoint& x, int n) const {
  if (n < 0) throw Error(ErrorCode::InvalidParams, "iterate needs n >= 0");
  SpherePoint y = x;
  for (int i = 0; i < n; ++i) y = apply(y);
  return y;
}

void RationalMap::preimage_roots(const SpherePoint& x, std::vector<SpherePoint>& out) const {
  // f(y) = [a : b]  <=>  b P(y) - a Q(y) = 0
  const auto [a, b] = x.lift();
  Complex h[17];
  std::vector<Complex> heap;
  Complex* c = h;
  if (degree_ + 1 > 17) {
    heap.resize(static_cast<std::size_t>(degree_ + 1));
    c = heap.data();
  }
  for (int k = 0; k <= degree_; ++k) {
    c[k] = b * numer_[static_cast<std::size_t>(k)] - a * denom_[static_cast<std::size_t>(k)];
  }
  poly::solve(std::span<const Complex>(c, static_cast<std::size_t>(degree_ + 1)), out);
}

std::vector<Preimage> RationalMap::preimages(const SpherePoint& x) const {
  std::vector<SpherePoint> roots;
  preimage_roots(x, roots);
  const double radius = std::sqrt(kRootTolerance);
  std::vector<Preimage> out;
  std::vector<bool> used(roots.size(), false);
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    const SpherePoint rep = roots[i];
    Complex sum = rep.coord();
    int count = 1;
    for (std::size_t j = i + 1; j < roots.size(); ++j) {
      if (used[j] || chordal(rep, roots[j]) > radius) continue;
      used[j] = true;
      sum += roots[j].as_chart(rep.chart()).coord();
      ++count;
    }
    const SpherePoint centre =
        SpherePoint::in_chart(sum / static_cast<double>(count), rep.chart()).canonical();
    out.push_back({centre, count});
  }
  return out;
}

std::string RationalMap::fingerprint() const {
  std::string s = "d" + std::to_string(degree_) + ":";
  char buf[64];
  for (const auto* v : {&numer_, &denom_}) {
    for (const Complex& c : *v) {
      std::snprintf(buf, sizeof buf, "%a,%a;", c.real(), c.imag());
      s += buf;
    }
    s += "/";
  }
  return s;
}

}  // namespace greenlab
