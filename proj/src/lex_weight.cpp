#include "mssp/lex_weight.hpp"

#include <algorithm>

#include "mssp/error.hpp"

namespace mssp {

std::string to_string(LexWeight::Perturb value) {
  if (value == 0) return "0";
  std::string digits;
  while (value != 0) {
    digits.push_back(static_cast<char>('0' + static_cast<int>(value % 10)));
    value /= 10;
  }
  std::reverse(digits.begin(), digits.end());
  return digits;
}

std::string to_string(const LexWeight& w) {
  if (w.is_infinite()) return "INF";
  return "(" + std::to_string(w.base()) + "," + to_string(w.perturb()) + ")";
}

std::ostream& operator<<(std::ostream& os, const LexWeight& w) { return os << to_string(w); }

std::string_view error_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DuplicateArc: return "DuplicateArc";
    case ErrorKind::BadRotation: return "BadRotation";
    case ErrorKind::NegativeWeight: return "NegativeWeight";
    case ErrorKind::SelfLoop: return "SelfLoop";
    case ErrorKind::WeightOverflow: return "WeightOverflow";
    case ErrorKind::DartNotAtVertex: return "DartNotAtVertex";
    case ErrorKind::SelfLoopContraction: return "SelfLoopContraction";
    case ErrorKind::DisconnectedInput: return "DisconnectedInput";
    case ErrorKind::FaceNotFound: return "FaceNotFound";
    case ErrorKind::UnreachableVertex: return "UnreachableVertex";
    case ErrorKind::NotATree: return "NotATree";
    case ErrorKind::BadRootIndex: return "BadRootIndex";
    case ErrorKind::FaceVertexQuery: return "FaceVertexQuery";
    case ErrorKind::Unreachable: return "Unreachable";
    case ErrorKind::VersionMismatch: return "VersionMismatch";
    case ErrorKind::CorruptFile: return "CorruptFile";
    case ErrorKind::BadInput: return "BadInput";
    case ErrorKind::Internal: return "Internal";
  }
  return "Unknown";
}

}  // namespace mssp
