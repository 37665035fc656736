#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "greenlab/error.hpp"
#include "greenlab_tools/config.hpp"
#include "greenlab_tools/experiments.hpp"

using namespace greenlab;
using namespace greenlab::tools;

namespace {

json small_config() {
  return resolve_config(parse_toml(R"(
seed = 5
[map]
numer = [0, 0, 1]
[sampler]
n_samples = 20000
[observables.phi]
kind = "trig_poly"
coeffs = [0, 0, 1]
[observables.psi]
kind = "trig_poly"
coeffs = [0, 1]
[correlations]
n_max = 4
n_orbits = 20000
)"));
}

}  // namespace

TEST(Experiments, CorrelationsOfCharactersOnTheCircle) {
  // phi = cos 2t, psi = cos t: the transfer halves frequencies, so C_1 = 1/2 and
  // C_n = 0 for n >= 2.
  const Artifact a = run_subcommand("correlations", small_config());
  EXPECT_TRUE(a.pass());
  const json& r = a.report;
  EXPECT_EQ(r["schema_version"], 1);
  const auto& n = r["n_grid"];
  ASSERT_GE(n.size(), 4u);
  for (std::size_t i = 0; i < n.size(); ++i) {
    const int k = n[i].get<int>();
    if (k < 1) continue;
    const double want = k == 1 ? 0.5 : 0.0;
    const double c = r["corr"][i].get<double>();
    const double se = r["corr_stderr"][i].get<double>();
    EXPECT_LE(std::abs(c - want), 3.0 * se + 1e-9) << "n = " << k;
  }
}

TEST(Experiments, OracleSuitePasses) {
  const Artifact a = run_subcommand("oracle-suite", resolve_config(json::object()));
  EXPECT_TRUE(a.pass()) << summary_text(a);
}

TEST(Experiments, UnknownSubcommandIsAConfigError) {
  EXPECT_THROW(run_subcommand("nope", default_config()), Error);
}

TEST(Experiments, WriteArtifactProducesReportSummaryAndResolvedConfig) {
  const json cfg = small_config();
  const Artifact a = run_subcommand("green", cfg);
  const auto dir = std::filesystem::temp_directory_path() / "greenlab_experiments_test";
  std::filesystem::remove_all(dir);
  write_artifact(a, cfg, dir, Format::both);
  EXPECT_TRUE(std::filesystem::exists(dir / "green.json"));
  EXPECT_TRUE(std::filesystem::exists(dir / "summary.txt"));
  std::ifstream in(dir / "config.resolved.json");
  EXPECT_EQ(json::parse(in), cfg);
  std::filesystem::remove_all(dir);
}
