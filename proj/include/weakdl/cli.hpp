#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace weakdl::cli {

// exit codes
inline constexpr int kOk = 0;
inline constexpr int kUsageError = 2;
inline constexpr int kDataError = 3;
inline constexpr int kWeakFound = 10;

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace weakdl::cli
