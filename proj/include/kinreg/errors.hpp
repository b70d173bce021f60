/// @file errors.hpp
/// @brief Exception types shared by the library and the command-line tool.
#pragma once

#include <stdexcept>
#include <string>

namespace kinreg {

/// A numerical routine could not produce a meaningful result
/// (degenerate fit, non-finite state, failed envelope, ...).
class ComputationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent experiment configuration.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what, std::string key = {})
        : std::runtime_error(what), key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

}  // namespace kinreg
