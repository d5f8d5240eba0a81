#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "platoonfd/error.hpp"

namespace spdlog {
class logger;
}

namespace platoonfd::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitUsage = 2,
  kExitEmptyInput = 3,
  kExitParseError = 4,
};

int exit_code_for(ErrorCode code);

/// `run.log` in the output directory, mirrored to stderr. The exit code is
/// decided by the first error logged.
class RunLog {
 public:
  explicit RunLog(const std::filesystem::path& path);
  ~RunLog();

  void info(const std::string& message);
  void warn(const std::string& message);
  void error(const std::string& message, int exit_code = kExitFailure);
  void error(const std::string& context, const Error& e);

  [[nodiscard]] int exit_code() const { return first_error_.value_or(kExitOk); }

 private:
  std::shared_ptr<spdlog::logger> logger_;
  std::optional<int> first_error_;
};

}  // namespace platoonfd::cli
