/// @file commands.hpp
/// @brief Subcommands of the kinreg tool. Each reads a strict JSON config,
/// writes CSV tables and JSON summaries into the output directory, and
/// prints the JSON summary on stdout.
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "kinreg/verify.hpp"

namespace kinreg {

enum class Command { analyze_flux, exponents, solve, defect, regularity, contraction, verify };

std::optional<Command> parse_command(const std::string& name);
std::string to_string(Command c);

struct RunOptions {
    std::optional<std::filesystem::path> config;
    std::filesystem::path out_dir = ".";
    Tier tier = Tier::fast;
    std::optional<std::uint64_t> seed;
};

/// Exit codes of run().
constexpr int exit_ok = 0;
constexpr int exit_computation = 1;
constexpr int exit_config = 2;

/// Runs a command. Errors are reported as {"error": {...}} on `err`;
/// the return value is the process exit code.
int run(Command command, const RunOptions& options, std::ostream& out, std::ostream& err);

/// Fixed 17-significant-digit formatting used in every CSV file.
std::string format_number(double x);

}  // namespace kinreg
