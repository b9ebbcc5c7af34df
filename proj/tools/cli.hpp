#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace fplb::cli {

enum ExitCode : int { kPass = 0, kVerificationFailure = 1, kUsageError = 2, kIoError = 3 };

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fplb::cli
