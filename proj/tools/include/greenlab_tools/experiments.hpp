#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "greenlab/io.hpp"

namespace greenlab::tools {

using json = nlohmann::json;

enum class Format { csv, json, both };

// Everything one subcommand produces.
struct Artifact {
  std::string name;
  json report;                                        // written as <name>.json
  std::vector<std::pair<std::string, Table>> tables;  // written as <stem>.csv
  std::vector<std::pair<std::string, std::string>> files;  // extra raw outputs
  std::vector<std::string> summary;
  std::vector<std::string> failures;  // failed pass/fail flags

  bool pass() const noexcept { return failures.empty(); }
};

inline const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"sample", "green",      "moderate",
                                              "correlations", "variance", "clt",
                                              "ldt",    "decompose",  "oracle-suite"};
  return names;
}

// Runs one of subcommands() against a resolved config.
Artifact run_subcommand(const std::string& name, const json& cfg);

// Writes the report files, summary.txt and config.resolved.json into dir.
void write_artifact(const Artifact& a, const json& cfg, const std::filesystem::path& dir,
                    Format format);

std::string summary_text(const Artifact& a);

}  // namespace greenlab::tools
