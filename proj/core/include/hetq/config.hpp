#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "hetq/model.hpp"

namespace hetq {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Optional per-model run defaults; command-line flags override them.
struct ConfigSettings {
    std::optional<std::size_t> n;
    std::optional<double> step;
    std::optional<double> horizon;
    std::optional<double> tol_mix;
    std::optional<double> tol_trunc;
    std::optional<std::size_t> paths;
    std::optional<std::uint64_t> seed;
    std::optional<double> epsilon;
    std::optional<double> delta1;
};

struct ModelConfig {
    ModelSpec spec;
    ConfigSettings settings;
};

/// Parses a JSON model description. See docs/config.md for the key set;
/// unknown keys and invalid rates raise ConfigError.
[[nodiscard]] ModelConfig parse_model_config(std::string_view json_text);
[[nodiscard]] ModelConfig load_model_config(const std::filesystem::path& path);

}  // namespace hetq
