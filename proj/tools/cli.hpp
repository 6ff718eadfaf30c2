#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hiermtl::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kUsage = 2,
  kIo = 3,
  kNonFinite = 4,
};

// Entry point shared by the executable and the tests. args excludes argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hiermtl::cli
