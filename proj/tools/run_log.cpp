#include "run_log.hpp"

#include <spdlog/logger.h>
#include <spdlog/sinks/basic_file_sink.h>
#include <spdlog/sinks/stdout_sinks.h>

namespace platoonfd::cli {

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyInput:
      return kExitEmptyInput;
    case ErrorCode::MissingColumn:
    case ErrorCode::MalformedInput:
    case ErrorCode::NonUniformSampling:
    case ErrorCode::UnknownDriverMode:
    case ErrorCode::RaggedFrame:
      return kExitParseError;
    default:
      return kExitFailure;
  }
}

RunLog::RunLog(const std::filesystem::path& path) {
  auto file = std::make_shared<spdlog::sinks::basic_file_sink_mt>(path.string(), true);
  auto console = std::make_shared<spdlog::sinks::stderr_sink_mt>();
  console->set_level(spdlog::level::warn);
  logger_ = std::make_shared<spdlog::logger>("run", spdlog::sinks_init_list{file, console});
  logger_->set_pattern("%l %v");
  logger_->set_level(spdlog::level::info);
  logger_->flush_on(spdlog::level::info);
}

RunLog::~RunLog() = default;

void RunLog::info(const std::string& message) { logger_->info(message); }

void RunLog::warn(const std::string& message) { logger_->warn(message); }

void RunLog::error(const std::string& message, int exit_code) {
  logger_->error(message);
  if (!first_error_) first_error_ = exit_code;
}

void RunLog::error(const std::string& context, const Error& e) {
  error(context + ": " + e.what(), exit_code_for(e.code()));
}

}  // namespace platoonfd::cli
