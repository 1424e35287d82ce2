#pragma once

#include <stdexcept>
#include <string>

namespace netfec {

// Failure categories shared by every module. The C API maps these one-to-one
// onto netfec_status values.
enum class ErrorCode {
  kDomain,
  kParse,
  kDisconnected,
  kBadLength,
  kNoPath,
  kUncoveredPair,
  kInfeasible,
  kBudgetExhausted,
  kMissingPair,
  kUnreachable,
  kConfig,
  kIo,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace netfec
