#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "greenlab/measure.hpp"
#include "greenlab/oracle_suite.hpp"
#include "greenlab/reports.hpp"
#include "greenlab/shift.hpp"
#include "greenlab/transfer.hpp"

namespace greenlab {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// {"schema_version": 1, "report": kind} merged with the body's fields.
json document(const std::string& kind, const json& body);

void to_json(json& j, const Estimate& e);
void to_json(json& j, const TransferValue& r);
void to_json(json& j, const GordinReport& r);
void to_json(json& j, const CorrelationReport& r);
void to_json(json& j, const BirkhoffCheck& r);
void to_json(json& j, const VarianceReport& r);
void to_json(json& j, const CltReport& r);
void to_json(json& j, const LdtReport& r);
void to_json(json& j, const HigherOrderReport& r);
void to_json(json& j, const ModerateReport& r);
void to_json(json& j, const BallMassReport& r);
void to_json(json& j, const ExpMomentReport& r);
void to_json(json& j, const MartingaleCheck& r);
void to_json(json& j, const ReconstructionCheck& r);
void to_json(json& j, const GreenValue& r);
void to_json(json& j, const Integral& r);
void to_json(json& j, const MeasureMeta& m);
void to_json(json& j, const OracleSuiteReport& r);

// Summary of a decomposition: N, tail bound, mean and the norms that chose N.
json decomposition_json(const MartingaleDecomposition& dec);

// [num, den] as integers when both fit in int64, as decimal strings otherwise.
json rational_json(const Rational& r);
Rational rational_from_json(const json& j);

// {d, depth, table: [[num, den], ...]}, cylinders in lexicographic order.
json cylinder_json(const CylinderFunction& c);
CylinderFunction cylinder_from_json(const json& j);

// A flat table: one row per n (or per grid point).
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

std::string csv_number(double v);

Table to_table(const GordinReport& r);
Table to_table(const CorrelationReport& r);
Table to_table(const VarianceReport& r);
Table birkhoff_table(const VarianceReport& r);
Table to_table(const CltReport& r);
Table to_table(const LdtReport& r);
Table to_table(const ModerateReport& r);
Table to_table(const BallMassReport& r);
Table to_table(const OracleSuiteReport& r);
Table to_table(const std::vector<HigherOrderReport>& rows);

void write_csv(std::ostream& os, const Table& t);

// Columns re, im, chart, weight; coordinates are the stored chart coordinates.
void write_measure_csv(std::ostream& os, const EmpiricalMeasure& mu);
EmpiricalMeasure read_measure_csv(std::istream& is, const MeasureMeta& meta = {});

}  // namespace greenlab
