#include "netfec/error.hpp"

namespace netfec {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kDomain: return "DOMAIN";
    case ErrorCode::kParse: return "PARSE";
    case ErrorCode::kDisconnected: return "DISCONNECTED";
    case ErrorCode::kBadLength: return "BAD_LENGTH";
    case ErrorCode::kNoPath: return "NO_PATH";
    case ErrorCode::kUncoveredPair: return "UNCOVERED_PAIR";
    case ErrorCode::kInfeasible: return "INFEASIBLE";
    case ErrorCode::kBudgetExhausted: return "BUDGET_EXHAUSTED";
    case ErrorCode::kMissingPair: return "MISSING_PAIR";
    case ErrorCode::kUnreachable: return "UNREACHABLE";
    case ErrorCode::kConfig: return "CONFIG";
    case ErrorCode::kIo: return "IO";
  }
  return "UNKNOWN";
}

}  // namespace netfec
