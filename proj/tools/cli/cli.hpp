#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "critheat/verdict.hpp"

namespace critheat::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitModuleError = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitVerdictFailed = 3;

// Parses "a..b" or a comma list of window indices ("1..3", "1,3").
std::vector<int> parse_windows(const std::string& text);

// --out, then CRITHEAT_OUT, then "out".
std::filesystem::path resolve_out_dir(const std::string& flag_value);

void write_verdicts_jsonl(const std::filesystem::path& path, const std::vector<Verdict>& verdicts);

// Full command line including the program name.
int dispatch(int argc, const char* const* argv);
int dispatch(const std::vector<std::string>& args);

}  // namespace critheat::cli
