#include "greenlab/io.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "greenlab/error.hpp"

namespace greenlab {

namespace {

std::string num(double v) { return csv_number(v); }
std::string num(int v) { return std::to_string(v); }
std::string num(std::size_t v) { return std::to_string(v); }
std::string flag(bool b) { return b ? "1" : "0"; }

double at(const std::vector<double>& v, std::size_t i) {
  return i < v.size() ? v[i] : std::numeric_limits<double>::quiet_NaN();
}

json window(std::pair<int, int> w) { return json::array({w.first, w.second}); }

json bools(const std::vector<bool>& v) {
  json out = json::array();
  for (bool b : v) out.push_back(b);
  return out;
}

std::string verdict(Verdict v) { return std::string(to_string(v)); }

}  // namespace

json document(const std::string& kind, const json& body) {
  json doc = {{"schema_version", kSchemaVersion}, {"report", kind}};
  for (auto it = body.begin(); it != body.end(); ++it) doc[it.key()] = it.value();
  return doc;
}

void to_json(json& j, const Estimate& e) { j = {{"value", e.value}, {"std_err", e.std_err}}; }

void to_json(json& j, const TransferValue& r) {
  j = {{"value", r.value}, {"std_err", r.std_err}, {"exact", r.exact},
       {"singular_hits", r.singular_hits}};
}

void to_json(json& j, const GordinReport& r) {
  j = {{"n", r.n},
       {"norm", r.norm},
       {"norm_stderr", r.norm_stderr},
       {"partial_sum", r.partial_sum},
       {"partial_sum_stderr", r.partial_sum_stderr},
       {"mean", r.mean},
       {"decay_slope", r.decay_slope},
       {"decay_slope_halfwidth", r.decay_slope_halfwidth},
       {"decay_points", r.decay_points}};
}

void to_json(json& j, const CorrelationReport& r) {
  j = {{"n_grid", r.n_grid},
       {"corr", r.corr},
       {"corr_stderr", r.corr_stderr},
       {"method", r.method},
       {"adjoint", r.adjoint},
       {"adjoint_stderr", r.adjoint_stderr},
       {"forward", r.forward},
       {"forward_stderr", r.forward_stderr},
       {"agree", bools(r.agree)},
       {"mean_phi", r.mean_phi},
       {"mean_psi", r.mean_psi},
       {"claim", r.claim},
       {"fitted_rate", r.fitted_rate},
       {"fitted_rate_halfwidth", r.fitted_rate_halfwidth},
       {"fit_points", r.fit_points},
       {"class_expected_rate", r.class_expected_rate},
       {"rate_ok", r.rate_ok}};
}

void to_json(json& j, const BirkhoffCheck& r) {
  j = {{"n", r.n},           {"value", r.value},       {"std_err", r.std_err},
       {"predicted", r.predicted}, {"residual", r.residual}, {"allowed", r.allowed},
       {"ok", r.ok}};
}

void to_json(json& j, const VarianceReport& r) {
  j = {{"mean", r.mean},
       {"c", r.c},
       {"c_stderr", r.c_stderr},
       {"partial_sums", r.partial_sums},
       {"sigma2", r.sigma2},
       {"sigma2_stderr", r.sigma2_stderr},
       {"gamma", r.gamma},
       {"gamma_stderr", r.gamma_stderr},
       {"sigma2_truncation", r.sigma2_truncation},
       {"gamma_truncation", r.gamma_truncation},
       {"birkhoff_check", r.birkhoff_check}};
}

void to_json(json& j, const CltReport& r) {
  json q = json::array();
  for (const auto& row : r.quantiles) {
    q.push_back({{"p", row.p}, {"empirical", row.empirical}, {"gaussian", row.gaussian}});
  }
  j = {{"n", r.n},
       {"n_orbits", r.n_orbits},
       {"sigma", r.sigma},
       {"ks", r.ks},
       {"sample_mean", r.sample_mean},
       {"sample_variance", r.sample_variance},
       {"quantiles", q}};
}

void to_json(json& j, const LdtReport& r) {
  j = {{"epsilon", r.epsilon},
       {"n_grid", r.n_grid},
       {"tail", r.tail},
       {"tail_stderr", r.tail_stderr},
       {"h_eps_hat", r.h_eps_hat},
       {"h_fitted", r.h_fitted},
       {"envelope", r.envelope},
       {"envelope_ok", bools(r.envelope_ok)},
       {"control_epsilon", r.control_epsilon},
       {"control_tail", r.control_tail},
       {"control_ok", r.control_ok}};
}

void to_json(json& j, const HigherOrderReport& r) {
  j = {{"n1", r.n1}, {"n2", r.n2}, {"gap", r.gap}, {"value", r.value}, {"std_err", r.std_err}};
}

void to_json(json& j, const ModerateReport& r) {
  j = {{"m_grid", r.m_grid},
       {"tail", r.tail},
       {"tail_stderr", r.tail_stderr},
       {"alpha_hat", r.alpha_hat},
       {"alpha_halfwidth", r.alpha_halfwidth},
       {"c_hat", r.c_hat},
       {"fit_window", window(r.fit_window)},
       {"degenerate", r.degenerate}};
}

void to_json(json& j, const BallMassReport& r) {
  j = {{"radii", r.radii},
       {"mass", r.mass},
       {"mass_stderr", r.mass_stderr},
       {"hits", r.hits},
       {"alpha_hat", r.alpha_hat},
       {"alpha_halfwidth", r.alpha_halfwidth},
       {"fit_window", window(r.fit_window)},
       {"nearest_sample", r.nearest_sample},
       {"degenerate", r.degenerate}};
}

void to_json(json& j, const ExpMomentReport& r) {
  json top = json::array();
  for (const auto& [idx, v] : r.top) top.push_back({{"index", idx}, {"contribution", v}});
  j = {{"value", r.value}, {"std_err", r.std_err}, {"non_finite", r.non_finite},
       {"flagged", r.flagged}, {"top", top}};
}

void to_json(json& j, const MartingaleCheck& r) {
  json pairs = json::array();
  for (const auto& p : r.orthogonality) {
    pairs.push_back({{"a", p.a}, {"b", p.b}, {"value", p.value}, {"std_err", p.std_err},
                     {"ok", p.ok}});
  }
  j = {{"lambda_norm", r.lambda_norm},
       {"lambda_norm_stderr", r.lambda_norm_stderr},
       {"lambda_ok", r.lambda_ok},
       {"orthogonality", pairs},
       {"tol", r.tol},
       {"ok", r.ok}};
}

void to_json(json& j, const ReconstructionCheck& r) {
  j = {{"points", r.points}, {"max_error", r.max_error}, {"tail_bound", r.tail_bound},
       {"ok", r.ok}};
}

void to_json(json& j, const GreenValue& r) {
  j = {{"potential", r.potential}, {"affine", r.affine}, {"tail_bound", r.tail_bound},
       {"increments", r.increments}};
}

void to_json(json& j, const Integral& r) {
  j = {{"value", r.value}, {"std_err", r.std_err}, {"rejected", r.rejected}};
}

void to_json(json& j, const MeasureMeta& m) {
  const SpherePoint s = m.start;
  j = {{"seed", m.seed},
       {"burn_in", m.burn_in},
       {"n_samples", m.n_samples},
       {"map_fingerprint", m.map_fingerprint},
       {"start", {{"re", s.coord().real()},
                  {"im", s.coord().imag()},
                  {"chart", s.chart() == Chart::z ? "z" : "w"}}}};
}

json decomposition_json(const MartingaleDecomposition& dec) {
  return {{"truncation_N", dec.truncation_N},
          {"tail_bound", dec.tail_bound},
          {"mean", dec.mean},
          {"norms", dec.norms}};
}

void to_json(json& j, const OracleSuiteReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"cases", c.cases},
                      {"detail", c.detail}});
  }
  json bennett = json::array();
  for (const auto& c : r.bennett.cases) {
    bennett.push_back({{"nu", rational_json(c.nu)},
                       {"lambda", rational_json(c.lambda)},
                       {"psi_checked", c.psi_checked},
                       {"worst", verdict(c.worst)},
                       {"extremal", verdict(c.extremal)},
                       {"extremal_centered", c.extremal_centered},
                       {"lambda_zero_exact", c.lambda_zero_exact}});
  }
  json fibers = json::array();
  for (const auto& f : r.fiber_sets) {
    fibers.push_back({{"d", f.d}, {"sets_checked", f.sets_checked}, {"ok", f.ok}});
  }
  json jac = json::array();
  for (const auto& a : r.jacobian) {
    jac.push_back({{"d", a.d},
                   {"depth", a.depth},
                   {"kappa", rational_json(a.kappa)},
                   {"kappa_tight", a.kappa_tight},
                   {"invariance_ok", a.invariance_ok},
                   {"sets_checked", a.sets_checked},
                   {"unions_checked", a.unions_checked},
                   {"delta", a.delta},
                   {"delta_ok", a.delta_ok},
                   {"ok", a.ok}});
  }
  json exps = json::array();
  for (const auto& e : r.exp_series) {
    json chain = json::array();
    for (Verdict v : e.chain) chain.push_back(verdict(v));
    exps.push_back({{"c", rational_json(e.c)},
                    {"theta", rational_json(e.theta)},
                    {"terms", e.terms},
                    {"chain", chain},
                    {"moment", e.moment},
                    {"hypothesis", verdict(e.hypothesis)},
                    {"final", verdict(e.final)},
                    {"ok", e.ok}});
  }
  j = {{"checks", checks},
       {"bennett", {{"b", rational_json(r.bennett.b)},
                    {"proven", r.bennett.proven},
                    {"tight", r.bennett.tight},
                    {"violated", r.bennett.violated},
                    {"cases", bennett}}},
       {"fiber_sets", fibers},
       {"bounded_jacobian", jac},
       {"exp_series", exps},
       {"ldt_h", r.ldt_h},
       {"ok", r.ok}};
}

json rational_json(const Rational& r) {
  const mpz_class& n = r.get_num();
  const mpz_class& d = r.get_den();
  if (n.fits_slong_p() && d.fits_slong_p()) return json::array({n.get_si(), d.get_si()});
  return json::array({n.get_str(), d.get_str()});
}

Rational rational_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) {
    throw Error(ErrorCode::ConfigError, "rational must be [num, den]");
  }
  auto part = [](const json& v) {
    if (v.is_number_integer()) return mpz_class(std::to_string(v.get<long long>()));
    if (v.is_string()) return mpz_class(v.get<std::string>());
    throw Error(ErrorCode::ConfigError, "rational entries must be integers or strings");
  };
  const mpz_class den = part(j[1]);
  if (den == 0) throw Error(ErrorCode::ConfigError, "rational with zero denominator");
  Rational r(part(j[0]), den);
  r.canonicalize();
  return r;
}

json cylinder_json(const CylinderFunction& c) {
  json table = json::array();
  for (const auto& v : c.table()) table.push_back(rational_json(v));
  return {{"d", c.d()}, {"depth", c.depth()}, {"table", table}};
}

CylinderFunction cylinder_from_json(const json& j) {
  for (const char* key : {"d", "depth", "table"}) {
    if (!j.contains(key)) {
      throw Error(ErrorCode::ConfigError, std::string("cylinder function missing field '") + key + "'");
    }
  }
  std::vector<Rational> table;
  for (const auto& v : j.at("table")) table.push_back(rational_from_json(v));
  return CylinderFunction(j.at("d").get<int>(), j.at("depth").get<int>(), std::move(table));
}

std::string csv_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Table to_table(const GordinReport& r) {
  Table t{{"n", "norm", "norm_stderr"}, {}};
  for (std::size_t i = 0; i < r.n.size(); ++i) {
    t.rows.push_back({num(r.n[i]), num(r.norm[i]), num(at(r.norm_stderr, i))});
  }
  return t;
}

Table to_table(const CorrelationReport& r) {
  Table t{{"n", "corr", "corr_stderr", "method", "adjoint", "adjoint_stderr", "forward",
           "forward_stderr", "agree"},
          {}};
  for (std::size_t i = 0; i < r.n_grid.size(); ++i) {
    t.rows.push_back({num(r.n_grid[i]), num(r.corr[i]), num(r.corr_stderr[i]),
                      i < r.method.size() ? r.method[i] : "",
                      num(at(r.adjoint, i)), num(at(r.adjoint_stderr, i)),
                      num(at(r.forward, i)), num(at(r.forward_stderr, i)),
                      flag(i < r.agree.size() && r.agree[i])});
  }
  return t;
}

Table to_table(const VarianceReport& r) {
  Table t{{"n", "c", "c_stderr", "partial_sum"}, {}};
  for (std::size_t i = 0; i < r.c.size(); ++i) {
    t.rows.push_back({num(i), num(r.c[i]), num(at(r.c_stderr, i)), num(at(r.partial_sums, i))});
  }
  return t;
}

Table birkhoff_table(const VarianceReport& r) {
  Table t{{"n", "value", "std_err", "predicted", "residual", "allowed", "ok"}, {}};
  for (const auto& b : r.birkhoff_check) {
    t.rows.push_back({num(b.n), num(b.value), num(b.std_err), num(b.predicted), num(b.residual),
                      num(b.allowed), flag(b.ok)});
  }
  return t;
}

Table to_table(const CltReport& r) {
  Table t{{"p", "empirical", "gaussian"}, {}};
  for (const auto& q : r.quantiles) t.rows.push_back({num(q.p), num(q.empirical), num(q.gaussian)});
  return t;
}

Table to_table(const LdtReport& r) {
  Table t{{"n", "tail", "tail_stderr", "envelope", "envelope_ok", "control_tail"}, {}};
  for (std::size_t i = 0; i < r.n_grid.size(); ++i) {
    t.rows.push_back({num(r.n_grid[i]), num(r.tail[i]), num(at(r.tail_stderr, i)),
                      num(at(r.envelope, i)), flag(i < r.envelope_ok.size() && r.envelope_ok[i]),
                      num(at(r.control_tail, i))});
  }
  return t;
}

Table to_table(const ModerateReport& r) {
  Table t{{"M", "tail", "tail_stderr", "in_fit"}, {}};
  for (std::size_t i = 0; i < r.m_grid.size(); ++i) {
    const int k = static_cast<int>(i);
    t.rows.push_back({num(r.m_grid[i]), num(r.tail[i]), num(at(r.tail_stderr, i)),
                      flag(k >= r.fit_window.first && k <= r.fit_window.second)});
  }
  return t;
}

Table to_table(const BallMassReport& r) {
  Table t{{"radius", "mass", "mass_stderr", "hits", "in_fit"}, {}};
  for (std::size_t i = 0; i < r.radii.size(); ++i) {
    const int k = static_cast<int>(i);
    t.rows.push_back({num(r.radii[i]), num(r.mass[i]), num(at(r.mass_stderr, i)),
                      num(i < r.hits.size() ? r.hits[i] : 0),
                      flag(k >= r.fit_window.first && k <= r.fit_window.second)});
  }
  return t;
}

Table to_table(const OracleSuiteReport& r) {
  Table t{{"check", "passed", "cases", "detail"}, {}};
  for (const auto& c : r.checks) t.rows.push_back({c.name, flag(c.passed), num(c.cases), c.detail});
  return t;
}

Table to_table(const std::vector<HigherOrderReport>& rows) {
  Table t{{"n1", "n2", "gap", "value", "std_err"}, {}};
  for (const auto& r : rows) {
    t.rows.push_back({num(r.n1), num(r.n2), num(r.gap), num(r.value), num(r.std_err)});
  }
  return t;
}

void write_csv(std::ostream& os, const Table& t) {
  auto cell = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
      if (ch == '"') q += '"';
      q += ch;
    }
    return q + "\"";
  };
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << cell(t.columns[i]);
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << cell(row[i]);
    os << '\n';
  }
}

void write_measure_csv(std::ostream& os, const EmpiricalMeasure& mu) {
  os << "re,im,chart,weight\n";
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const SpherePoint& p = mu.points[i];
    os << csv_number(p.coord().real()) << ',' << csv_number(p.coord().imag()) << ','
       << (p.chart() == Chart::z ? 'z' : 'w') << ',' << csv_number(mu.weights[i]) << '\n';
  }
}

EmpiricalMeasure read_measure_csv(std::istream& is, const MeasureMeta& meta) {
  std::string line;
  if (!std::getline(is, line) || line != "re,im,chart,weight") {
    throw Error(ErrorCode::ConfigError, "measure CSV must start with 're,im,chart,weight'");
  }
  std::vector<SpherePoint> pts;
  std::vector<double> w;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string re, im, chart, weight;
    std::getline(row, re, ',');
    std::getline(row, im, ',');
    std::getline(row, chart, ',');
    std::getline(row, weight, ',');
    if (chart != "z" && chart != "w") {
      throw Error(ErrorCode::ConfigError, "measure CSV chart must be 'z' or 'w'");
    }
    pts.push_back(SpherePoint::in_chart({std::stod(re), std::stod(im)},
                                        chart == "z" ? Chart::z : Chart::w));
    w.push_back(std::stod(weight));
  }
  EmpiricalMeasure mu = EmpiricalMeasure::from_points(std::move(pts), std::move(w));
  mu.meta = meta;
  return mu;
}

}  // namespace greenlab
