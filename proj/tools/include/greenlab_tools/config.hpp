#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "greenlab/observable.hpp"
#include "greenlab/rational_map.hpp"

namespace greenlab::tools {

using json = nlohmann::json;

// Parses the TOML subset used by experiment configs: tables, dotted keys,
// basic and literal strings, integers, floats, booleans, arrays (multi-line
// allowed) and inline tables. Throws ConfigError with a line number.
json parse_toml(std::string_view text);

// .json files are read as JSON, everything else as TOML.
json load_config_file(const std::filesystem::path& path);

json default_config();

// Merges `user` over the defaults. Unknown fields and type mismatches are
// ConfigErrors naming the field. A user config that sets anything must carry
// map.numer.
json resolve_config(const json& user);

RationalMap map_from_config(const json& cfg);
// `name` is a key of cfg.observables.
Observable observable_from_config(const json& cfg, const std::string& name);
Observable observable_from_spec(const json& spec, const std::string& field);

SpherePoint point_from_json(const json& v, const std::string& field);
Complex complex_from_json(const json& v, const std::string& field);

}  // namespace greenlab::tools
