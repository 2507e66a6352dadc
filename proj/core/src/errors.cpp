#include "morphtip/errors.hpp"

namespace morphtip {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::Unreachable: return "Unreachable";
    case ErrorKind::Penetration: return "Penetration";
    case ErrorKind::Unsupported: return "Unsupported";
    case ErrorKind::Degenerate: return "Degenerate";
  }
  return "Unknown";
}

}  // namespace morphtip
