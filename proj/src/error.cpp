#include "metro/error.hpp"

namespace metro {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::UnknownStation: return "UnknownStation";
    case ErrorKind::SelfLoop: return "SelfLoop";
    case ErrorKind::EmptyNetwork: return "EmptyNetwork";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::SolverDivergence: return "SolverDivergence";
    case ErrorKind::CountOverflow: return "CountOverflow";
    case ErrorKind::MalformedRow: return "MalformedRow";
    case ErrorKind::DuplicateStation: return "DuplicateStation";
    case ErrorKind::MissingStation: return "MissingStation";
    case ErrorKind::DuplicateRecord: return "DuplicateRecord";
    case ErrorKind::MissingZone: return "MissingZone";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace metro
