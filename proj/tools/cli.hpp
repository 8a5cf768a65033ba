#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace galekit {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitIo = 2;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitInternal = 70;

// Runs one galekit command line. Paths given as "-" use `in` / `out`; the
// human summary of bit-producing commands goes to `err`.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace galekit
