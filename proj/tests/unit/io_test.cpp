#include <gtest/gtest.h>

#include <sstream>

#include "greenlab/error.hpp"
#include "greenlab/io.hpp"

using namespace greenlab;

TEST(Json, ModerateReportFieldNames) {
  ModerateReport r;
  r.m_grid = {1.0, 2.0};
  r.tail = {0.3, 0.1};
  r.tail_stderr = {0.01, 0.005};
  r.alpha_hat = 1.02;
  r.alpha_halfwidth = 0.05;
  r.c_hat = 0.9;
  r.fit_window = {0, 1};
  const json j = r;
  for (const char* key : {"m_grid", "tail", "tail_stderr", "alpha_hat", "alpha_halfwidth", "c_hat",
                          "fit_window"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j["fit_window"], json::array({0, 1}));
  EXPECT_DOUBLE_EQ(j["alpha_hat"].get<double>(), 1.02);
}

TEST(Json, DocumentsCarryTheSchemaVersion) {
  const json d = document("ldt", LdtReport{});
  EXPECT_EQ(d["schema_version"], 1);
  EXPECT_EQ(d["report"], "ldt");
  EXPECT_TRUE(d.contains("tail"));
}

TEST(Json, NanBecomesNull) {
  CorrelationReport r;
  r.adjoint = {std::numeric_limits<double>::quiet_NaN()};
  const json j = r;
  EXPECT_NE(j.dump().find("\"adjoint\":[null]"), std::string::npos) << j.dump();
}

TEST(Json, CylinderRoundTrip) {
  Rational big("123456789012345678901234567890/7");
  big.canonicalize();
  const CylinderFunction c(2, 1, {Rational(-3, 4), big});
  const json j = cylinder_json(c);
  EXPECT_EQ(j["d"], 2);
  EXPECT_EQ(j["depth"], 1);
  EXPECT_EQ(j["table"][0], json::array({-3, 4}));
  EXPECT_TRUE(j["table"][1][0].is_string());
  const CylinderFunction back = cylinder_from_json(j);
  EXPECT_TRUE(back.same_function(c));
}

TEST(Json, CylinderMissingFieldNamesIt) {
  try {
    cylinder_from_json({{"d", 2}, {"table", json::array()}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ConfigError);
    EXPECT_NE(std::string(e.what()).find("depth"), std::string::npos);
  }
}

TEST(Csv, MeasureRoundTrip) {
  const EmpiricalMeasure mu = EmpiricalMeasure::from_points(
      {SpherePoint::from_z({0.1, 0.2}), SpherePoint::from_z({30.0, -1.0}), SpherePoint::infinity()},
      {1.0, 2.0, 1.0});
  std::stringstream s;
  write_measure_csv(s, mu);
  const std::string text = s.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "re,im,chart,weight");
  const EmpiricalMeasure back = read_measure_csv(s);
  ASSERT_EQ(back.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(back.points[i], mu.points[i]);
    EXPECT_EQ(back.weights[i], mu.weights[i]);
  }
}

TEST(Csv, OneRowPerN) {
  LdtReport r;
  r.n_grid = {16, 32};
  r.tail = {0.25, 0.1};
  r.tail_stderr = {0.01, 0.01};
  r.envelope = {0.3, 0.2};
  r.envelope_ok = {true, true};
  r.control_tail = {0.0, 0.0};
  std::stringstream s;
  write_csv(s, to_table(r));
  std::string line;
  std::getline(s, line);
  EXPECT_EQ(line, "n,tail,tail_stderr,envelope,envelope_ok,control_tail");
  std::getline(s, line);
  EXPECT_EQ(line, "16,0.25,0.01,0.29999999999999999,1,0");
}

TEST(Csv, QuotesCellsWithCommas) {
  Table t{{"a"}, {{"x,y"}, {"say \"hi\""}}};
  std::stringstream s;
  write_csv(s, t);
  EXPECT_EQ(s.str(), "a\n\"x,y\"\n\"say \"\"hi\"\"\"\n");
}
