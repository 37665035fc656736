#include <gtest/gtest.h>

#include <string>

#include "greenlab/error.hpp"
#include "greenlab_tools/config.hpp"

using namespace greenlab;
using namespace greenlab::tools;

namespace {

std::string config_error_of(const json& user) {
  try {
    resolve_config(user);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ConfigError);
    return e.what();
  }
  ADD_FAILURE() << "no ConfigError raised";
  return {};
}

}  // namespace

TEST(Toml, TablesDottedKeysAndArrays) {
  const json j = parse_toml(R"(
seed = 7
title = 'literal \n kept'
[map]
numer = [-1, 0, 1]   # z^2 - 1
denom = [
  1,
]
[observables.phi]
kind = "holder"
nu = 0.5
center = [1.0, 0.0]
[sampler]
start = { re = 2, im = 1 }
flags.fast = true
)");
  EXPECT_EQ(j["seed"], 7);
  EXPECT_EQ(j["title"], "literal \\n kept");
  EXPECT_EQ(j["map"]["numer"], json::array({-1, 0, 1}));
  EXPECT_EQ(j["map"]["denom"], json::array({1}));
  EXPECT_EQ(j["observables"]["phi"]["kind"], "holder");
  EXPECT_DOUBLE_EQ(j["observables"]["phi"]["nu"].get<double>(), 0.5);
  EXPECT_EQ(j["sampler"]["start"]["re"], 2);
  EXPECT_EQ(j["sampler"]["flags"]["fast"], true);
}

TEST(Toml, SyntaxErrorsCarryALineNumber) {
  try {
    parse_toml("seed = 1\nmap = [1, 2\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ConfigError);
    EXPECT_NE(std::string(e.what()).find("line"), std::string::npos) << e.what();
  }
}

TEST(ResolveConfig, EmptyConfigIsTheDefault) {
  EXPECT_EQ(resolve_config(json::object()), default_config());
}

TEST(ResolveConfig, MissingNumeratorIsNamed) {
  EXPECT_NE(config_error_of({{"seed", 3}}).find("map.numer"), std::string::npos);
  EXPECT_NE(config_error_of({{"map", {{"denom", {1}}}}}).find("map.numer"), std::string::npos);
}

TEST(ResolveConfig, UnknownFieldsAreNamed) {
  const std::string msg = config_error_of({{"map", {{"numer", {0, 0, 1}}}}, {"sampler", {{"n_sample", 5}}}});
  EXPECT_NE(msg.find("sampler.n_sample"), std::string::npos) << msg;
  EXPECT_NE(config_error_of({{"map", {{"numer", {0, 0, 1}}, {"extra", 1}}}}).find("map.extra"),
            std::string::npos);
}

TEST(ResolveConfig, TypeMismatchesAreNamed) {
  const std::string msg =
      config_error_of({{"map", {{"numer", {0, 0, 1}}}}, {"clt", {{"n", "many"}}}});
  EXPECT_NE(msg.find("clt.n"), std::string::npos) << msg;
}

TEST(ResolveConfig, BadObservableIsNamed) {
  const json user = {{"map", {{"numer", {0, 0, 1}}}},
                     {"observables", {{"g", {{"kind", "holder"}, {"nu", 0.5}}}}}};
  EXPECT_NE(config_error_of(user).find("observables.g.center"), std::string::npos);
}

TEST(ResolveConfig, DegenerateMapIsAConfigError) {
  const std::string msg = config_error_of({{"map", {{"numer", {0, 1}}, {"denom", {0, 1}}}}});
  EXPECT_NE(msg.find("map"), std::string::npos);
}

TEST(ResolveConfig, ResolvedConfigRoundTripsThroughJson) {
  const json user = parse_toml(R"(
seed = 11
[map]
numer = [-1, 0, 1]
[observables.f]
kind = "sum"
terms = [{ weight = 2.0, observable = { kind = "constant", value = 1.0 } },
         { observable = { kind = "trig_poly", coeffs = [0, [0, 1]] } }]
)");
  const json cfg = resolve_config(user);
  EXPECT_EQ(cfg["seed"], 11);
  EXPECT_EQ(cfg["map"]["denom"], json::array({1}));
  EXPECT_EQ(resolve_config(json::parse(cfg.dump())), cfg);
  const Observable f = observable_from_config(cfg, "f");
  EXPECT_NEAR(f(SpherePoint::from_z({0.0, 1.0})), 1.0, 1e-12);
  EXPECT_NEAR(f(SpherePoint::from_z({1.0, 0.0})), 2.0, 1e-12);
}

TEST(Points, InfinityAndComplexForms) {
  EXPECT_TRUE(point_from_json("inf", "p").is_infinity());
  EXPECT_EQ(complex_from_json(json::array({1.5, -2}), "p"), Complex(1.5, -2.0));
  EXPECT_EQ(complex_from_json(3, "p"), Complex(3.0, 0.0));
  EXPECT_THROW(complex_from_json("x", "p"), Error);
}
