#include "lnncomm/error.hpp"

namespace lnncomm {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Config: return "config";
    case ErrorKind::Data: return "data";
    case ErrorKind::Dimension: return "dimension";
    case ErrorKind::Numerical: return "numerical";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Config: return 2;
    case ErrorKind::Data:
    case ErrorKind::Dimension:
    case ErrorKind::Io: return 3;
    case ErrorKind::Numerical: return 4;
  }
  return 1;
}

}  // namespace lnncomm
