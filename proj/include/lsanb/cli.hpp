#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "lsanb/pipeline.hpp"

namespace lsanb::cli {

// Exit codes: 0 success, 1 runtime failure, 2 bad arguments.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// `key = value` lines with the PipelineConfig field names; '#' starts a
// comment line and values may be double-quoted. Unknown keys and bad values
// throw InvalidConfig.
PipelineConfig load_config_file(const std::filesystem::path& path);
PipelineConfig parse_config_text(const std::string& text);

}  // namespace lsanb::cli
