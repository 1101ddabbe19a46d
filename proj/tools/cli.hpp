#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "json.hpp"

namespace skeinlab {

enum ExitCode : int { kPass = 0, kCheckFailed = 1, kUsage = 2 };

// Runs the skeinlab command line. Output goes to `out` (or to --out), diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

std::uint64_t fnv1a64(const std::string& bytes);
std::string job_hash(const nlohmann::json& job);

// Table rendering used by --output csv.
std::string render_csv(const nlohmann::json& record);

}  // namespace skeinlab
