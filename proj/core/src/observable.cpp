#include "greenlab/observable.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "greenlab/error.hpp"

namespace greenlab {

namespace {

std::string format_complex(Complex c) {
  char buf[64];
  if (c.imag() == 0.0) {
    std::snprintf(buf, sizeof buf, "%.17g", c.real());
  } else {
    std::snprintf(buf, sizeof buf, "%.17g%+.17gi", c.real(), c.imag());
  }
  return buf;
}

}  // namespace

std::string_view to_string(ObservableClass cls) noexcept {
  switch (cls) {
    case ObservableClass::trig_poly: return "trigpoly";
    case ObservableClass::holder: return "holder";
    case ObservableClass::log_singular: return "logsing";
    case ObservableClass::composite: return "composite";
  }
  return "unknown";
}

Observable Observable::trig_poly(std::vector<Complex> coeffs) {
  while (!coeffs.empty() && coeffs.back() == Complex{}) coeffs.pop_back();
  Observable o;
  o.cls_ = ObservableClass::trig_poly;
  std::string desc = "trigpoly[";
  for (std::size_t k = 0; k < coeffs.size(); ++k) desc += (k ? "," : "") + format_complex(coeffs[k]);
  o.description_ = desc + "]";
  if (coeffs.empty()) {
    o.eval_ = [](const SpherePoint&) { return 0.0; };
    o.mean_hint_ = 0.0;
    return o;
  }
  o.eval_ = [c = std::move(coeffs)](const SpherePoint& p) {
    if (p.is_infinity()) return std::numeric_limits<double>::infinity();
    const Complex z = p.z();
    Complex acc = c.back();
    for (std::size_t k = c.size() - 1; k-- > 0;) acc = acc * z + c[k];
    return acc.real();
  };
  return o;
}

Observable Observable::holder_dist_pow(double nu, SpherePoint center) {
  if (!(nu > 0.0 && nu <= 2.0)) {
    throw Error(ErrorCode::InvalidParams, "holder exponent nu must lie in (0, 2]");
  }
  Observable o;
  o.cls_ = ObservableClass::holder;
  o.decay_exponent_ = nu / 2.0;
  char buf[128];
  std::snprintf(buf, sizeof buf, "holder[nu=%.17g,center=%s]", nu,
                format_complex(center.z()).c_str());
  o.description_ = buf;
  o.eval_ = [nu, center](const SpherePoint& p) { return std::pow(chordal(p, center), nu); };
  return o;
}

Observable Observable::log_singular(double beta, SpherePoint center) {
  Observable o;
  o.cls_ = ObservableClass::log_singular;
  o.bounded_ = false;
  char buf[128];
  std::snprintf(buf, sizeof buf, "logsing[beta=%.17g,center=%s]", beta,
                format_complex(center.z()).c_str());
  o.description_ = buf;
  o.eval_ = [beta, center](const SpherePoint& p) {
    return beta * std::log(std::max(chordal(p, center), kSingularCutoff));
  };
  o.singular_ = [center](const SpherePoint& p) { return chordal(p, center) < kSingularCutoff; };
  return o;
}

Observable Observable::constant(double c) {
  Observable o;
  o.cls_ = ObservableClass::trig_poly;
  o.eval_ = [c](const SpherePoint&) { return c; };
  o.mean_hint_ = c;
  char buf[64];
  std::snprintf(buf, sizeof buf, "constant[%.17g]", c);
  o.description_ = buf;
  return o;
}

Observable Observable::custom(ObservableClass cls, Evaluator eval, double decay_exponent,
                              std::string description) {
  Observable o;
  o.cls_ = cls;
  o.eval_ = std::move(eval);
  o.decay_exponent_ = decay_exponent;
  o.bounded_ = cls != ObservableClass::log_singular;
  o.description_ = std::move(description);
  return o;
}

Observable linear_combination(const std::vector<std::pair<double, Observable>>& terms) {
  if (terms.empty()) return Observable::constant(0.0);
  Observable o;
  o.cls_ = terms.size() == 1 ? terms.front().second.cls_ : ObservableClass::composite;
  o.decay_exponent_ = terms.front().second.decay_exponent_;
  o.bounded_ = true;
  bool all_hints = true;
  double hint = 0.0;
  bool any_singular = false;
  std::string desc;
  for (const auto& [c, obs] : terms) {
    o.decay_exponent_ = std::min(o.decay_exponent_, obs.decay_exponent_);
    o.bounded_ = o.bounded_ && obs.bounded_;
    any_singular = any_singular || static_cast<bool>(obs.singular_);
    if (obs.mean_hint_) {
      hint += c * *obs.mean_hint_;
    } else {
      all_hints = false;
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%s%.17g*", desc.empty() ? "" : "+", c);
    desc += buf + obs.description_;
  }
  if (all_hints) o.mean_hint_ = hint;
  o.description_ = desc;
  o.eval_ = [terms](const SpherePoint& p) {
    double s = 0.0;
    for (const auto& [c, obs] : terms) s += c * obs(p);
    return s;
  };
  if (any_singular) {
    o.singular_ = [terms](const SpherePoint& p) {
      return std::any_of(terms.begin(), terms.end(),
                         [&](const auto& t) { return t.second.singular_hit(p); });
    };
  }
  return o;
}

}  // namespace greenlab
