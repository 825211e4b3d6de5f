#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "giantflux/harness.hpp"

namespace giantflux::cli {

/// Malformed or invalid configuration; `what()` names the offending field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Everything a subcommand needs, validated before any computation.
struct RunConfig {
  ExperimentConfig experiment;
  /// Number of limit draws for `limit`; defaults to the replicate count.
  std::size_t draws = 0;
};

RunConfig parse_config(std::string_view json_text);

/// Exit codes: 0 success, 1 failed check or runtime failure, 2 usage/config error.
int dispatch(const std::vector<std::string>& args);
int dispatch(int argc, char** argv);

}  // namespace giantflux::cli
