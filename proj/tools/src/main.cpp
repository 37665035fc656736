#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "greenlab/error.hpp"
#include "greenlab/io.hpp"
#include "greenlab/parallel.hpp"
#include "greenlab_tools/acceptance.hpp"
#include "greenlab_tools/config.hpp"
#include "greenlab_tools/experiments.hpp"

namespace gl = greenlab;
namespace gt = greenlab::tools;

namespace {

enum Exit { kPass = 0, kFailedChecks = 1, kUsage = 2, kRuntime = 3 };

int run_all(const gt::json& cfg, const std::filesystem::path& out, gt::Format format) {
  const auto seed = cfg.at("seed").get<std::uint64_t>();
  const auto results = gt::run_acceptance(seed, {}, [](const gt::CriterionResult& r) {
    std::cout << gt::result_line(r) << std::endl;
  });
  std::filesystem::create_directories(out);
  gt::json rows = gt::json::array();
  gl::Table t{{"criterion", "title", "pass", "seconds", "budget_seconds", "detail"}, {}};
  std::string summary = "greenlab all\n";
  bool pass = true;
  for (const auto& r : results) {
    pass = pass && r.pass;
    rows.push_back({{"criterion", r.id}, {"title", r.title}, {"pass", r.pass},
                    {"detail", r.detail}, {"data", r.data}});
    t.rows.push_back({std::to_string(r.id), r.title, r.pass ? "1" : "0", gl::csv_number(r.seconds),
                      gl::csv_number(r.budget_seconds), r.detail});
    summary += "  " + gt::result_line(r) + "\n";
  }
  summary += pass ? "status: PASS\n" : "status: FAIL\n";
  if (format != gt::Format::csv) {
    std::ofstream(out / "acceptance.json")
        << gl::document("acceptance", {{"seed", seed}, {"criteria", rows}}).dump(2) << "\n";
  }
  if (format != gt::Format::json) {
    std::ofstream csv(out / "acceptance.csv");
    gl::write_csv(csv, t);
  }
  std::ofstream(out / "summary.txt") << summary;
  std::ofstream(out / "config.resolved.json") << cfg.dump(2) << "\n";
  return pass ? kPass : kFailedChecks;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"greenlab: numerical checks for equilibrium measures of rational maps"};
  app.fallthrough();
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::string out_dir = "greenlab-out";
  std::string format_name = "both";
  app.add_option("--config", config_path, "TOML or JSON experiment config");
  app.add_option("--seed", seed, "master seed (overrides the config)");
  app.add_option("--workers", workers, "worker threads (never changes results)")
      ->check(CLI::Range(1, 1024));
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--format", format_name, "report format")
      ->check(CLI::IsMember({"csv", "json", "both"}));

  for (const auto& name : gt::subcommands()) app.add_subcommand(name, "run the " + name + " experiment");
  app.add_subcommand("all", "run every acceptance criterion");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  const std::string sub = app.get_subcommands().front()->get_name();
  const gt::Format format = format_name == "csv"    ? gt::Format::csv
                            : format_name == "json" ? gt::Format::json
                                                    : gt::Format::both;
  try {
    gt::json user = config_path.empty() ? gt::json::object() : gt::load_config_file(config_path);
    gt::json cfg = gt::resolve_config(user);
    if (seed) cfg["seed"] = *seed;
    if (workers) cfg["workers"] = *workers;
    gl::set_workers(cfg.at("workers").get<int>());

    if (sub == "all") return run_all(cfg, out_dir, format);

    const gt::Artifact a = gt::run_subcommand(sub, cfg);
    gt::write_artifact(a, cfg, out_dir, format);
    std::cout << gt::summary_text(a);
    return a.pass() ? kPass : kFailedChecks;
  } catch (const gl::Error& e) {
    std::cerr << "greenlab: " << gl::to_string(e.code()) << ": " << e.what() << "\n";
    const bool usage = e.code() == gl::ErrorCode::ConfigError || e.code() == gl::ErrorCode::InvalidParams;
    return usage ? kUsage : kRuntime;
  } catch (const std::exception& e) {
    std::cerr << "greenlab: " << e.what() << "\n";
    return kRuntime;
  }
}
