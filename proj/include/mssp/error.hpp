#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mssp {

enum class ErrorKind {
  DuplicateArc,
  BadRotation,
  NegativeWeight,
  SelfLoop,
  WeightOverflow,
  DartNotAtVertex,
  SelfLoopContraction,
  DisconnectedInput,
  FaceNotFound,
  UnreachableVertex,
  NotATree,
  BadRootIndex,
  FaceVertexQuery,
  Unreachable,
  VersionMismatch,
  CorruptFile,
  BadInput,
  Internal,
};

std::string_view error_name(ErrorKind kind);

/// Every library failure surfaces as this exception; `kind()` is stable and
/// is what the CLI prints on its error line.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(error_name(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace mssp
