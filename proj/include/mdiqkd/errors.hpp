#pragma once

#include <stdexcept>
#include <string>

namespace mdiqkd {

/// Configuration problems: missing intensity levels, unknown config keys,
/// missing observable cells.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Estimator failures: crossed bounds beyond tolerance, zero yields,
/// missing single-photon bounds.
class EstimationError : public std::runtime_error {
public:
    explicit EstimationError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input files (counts files, config files).
class SchemaError : public std::runtime_error {
public:
    explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mdiqkd
