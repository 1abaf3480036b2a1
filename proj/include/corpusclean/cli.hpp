// Command-line front end shared by the corpus-clean binary and the tests.
//
// Exit codes: 0 success, 1 usage error, 2 data error (alignment, decoding,
// malformed reports or models), 3 I/O error.

#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "corpusclean/pipeline.hpp"

namespace corpusclean {

inline constexpr std::string_view kVersion = "corpus-clean 1.0.0";

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitData = 2,
  kExitIo = 3,
};

/// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Applies a JSON config (PipelineConfig field names) on top of `base`.
/// Unknown fields are rejected with ConfigError.
PipelineConfig apply_config_json(std::string_view json, PipelineConfig base);

}  // namespace corpusclean
