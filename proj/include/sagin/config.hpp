#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "sagin/env.hpp"
#include "sagin/policies.hpp"

namespace sagin {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunSettings {
    PolicyKind policy = PolicyKind::Ewg;
    int episodes = 1;
    std::uint64_t seed = 1;
    std::string out = "trace.csv";
    std::string bind = "127.0.0.1:5555";
};

struct RunConfig {
    SimConfig sim;
    RunSettings run;
    EwgWeights ewg;
};

/// Parses a JSON run configuration. Missing keys keep their defaults;
/// unknown keys and type mismatches raise ConfigError naming the key path.
/// The resulting SimConfig is validated.
RunConfig parse_run_config(const nlohmann::json& j);
RunConfig load_run_config(const std::filesystem::path& path);

/// Full configuration with every key present (unset reward weights as null).
nlohmann::json to_json(const RunConfig& c);

}  // namespace sagin
