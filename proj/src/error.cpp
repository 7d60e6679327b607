#include "tracesim/error.hpp"

namespace tracesim {

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::EmptyAlphabet: return "EmptyAlphabet";
    case ErrorKind::DuplicateSymbol: return "DuplicateSymbol";
    case ErrorKind::DepthMismatch: return "DepthMismatch";
    case ErrorKind::MonadMismatch: return "MonadMismatch";
    case ErrorKind::DomainMismatch: return "DomainMismatch";
    case ErrorKind::NotDecreasing: return "NotDecreasing";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnknownState: return "UnknownState";
    case ErrorKind::UnknownSymbol: return "UnknownSymbol";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::RowSumExceedsOne: return "RowSumExceedsOne";
    case ErrorKind::MonadFieldInvalid: return "MonadFieldInvalid";
    case ErrorKind::NotWordMode: return "NotWordMode";
    case ErrorKind::AlphabetMismatch: return "AlphabetMismatch";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
  }
  return "UnknownError";
}

}  // namespace tracesim
