// Copyright Contributors to the lerf project.
// SPDX-License-Identifier: Apache-2.0

#include "lerf/error.hpp"

namespace lerf {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::kParameter:
      return "parameter error";
    case ErrorKind::kShape:
      return "shape error";
    case ErrorKind::kIo:
      return "I/O error";
    case ErrorKind::kFormat:
      return "format error";
    case ErrorKind::kConfiguration:
      return "configuration error";
    case ErrorKind::kEvaluation:
      return "evaluation error";
  }
  return "error";
}

}  // namespace lerf
