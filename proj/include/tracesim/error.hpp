#ifndef TRACESIM_ERROR_HPP
#define TRACESIM_ERROR_HPP

#include <stdexcept>
#include <string>

namespace tracesim {

enum class ErrorKind {
  EmptyAlphabet,
  DuplicateSymbol,
  DepthMismatch,
  MonadMismatch,
  DomainMismatch,
  NotDecreasing,
  SyntaxError,
  UnknownState,
  UnknownSymbol,
  ArityMismatch,
  RowSumExceedsOne,
  MonadFieldInvalid,
  NotWordMode,
  AlphabetMismatch,
  BudgetExceeded,
};

const char* error_kind_name(ErrorKind kind);

struct Error : std::runtime_error {
  Error(ErrorKind k, const std::string& message)
      : std::runtime_error(std::string(error_kind_name(k)) + ": " + message),
        kind(k) {}

  ErrorKind kind;
};

}  // namespace tracesim

#endif
