#pragma once

#include <stdexcept>
#include <string>

namespace meshonet {

// Exit codes returned by the CLI. Library code throws the typed errors
// below; main() maps them to these codes (see README for the table).
enum ExitCode : int {
  exit_ok = 0,
  exit_invalid_mesh = 1,   // generation succeeded but the mesh has inverted cells
  exit_config = 2,         // bad config, usage, or API contract violation
  exit_domain = 3,         // geometry family parameter out of range
  exit_nonconverged = 4,   // solver hit max_iters without converging
  exit_numeric = 5,        // NaN/Inf encountered (divergence, bad activations)
  exit_io = 6,             // file missing or malformed
};

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// family parameter outside its documented range
struct DomainParamError : std::runtime_error {
  explicit DomainParamError(const std::string& msg) : std::runtime_error(msg) {}
};

// caller violated an API precondition (mismatched sizes, bad tags, ...)
struct ContractError : std::runtime_error {
  explicit ContractError(const std::string& msg) : std::runtime_error(msg) {}
};

// geometry handed to a generator does not satisfy its contract
struct GeometryError : std::runtime_error {
  explicit GeometryError(const std::string& msg) : std::runtime_error(msg) {}
};

// solver hit its sweep limit without reaching tol
struct ConvergenceError : std::runtime_error {
  explicit ConvergenceError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoError : std::runtime_error {
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace meshonet
