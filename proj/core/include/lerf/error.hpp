// Copyright Contributors to the lerf project.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lerf {

enum class ErrorKind {
  kParameter,
  kShape,
  kIo,
  kFormat,
  kConfiguration,
  kEvaluation,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Base class of every exception thrown by the library. The kind drives the
/// CLI exit code mapping.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Out-of-range scalar argument (sigma <= 0, scale <= 0, NaN, ...).
class ParameterError : public Error {
 public:
  explicit ParameterError(const std::string& what)
      : Error(ErrorKind::kParameter, what) {}
};

/// Mismatched or unsupported dimensions / channel counts.
class ShapeError : public Error {
 public:
  explicit ShapeError(const std::string& what)
      : Error(ErrorKind::kShape, what) {}
};

/// File missing or unreadable / unwritable.
class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::kIo, what) {}
};

/// File readable but its content is malformed or unsupported.
class FormatError : public Error {
 public:
  explicit FormatError(const std::string& what)
      : Error(ErrorKind::kFormat, what) {}
};

/// Inconsistent combination of otherwise valid inputs (missing LUT bank,
/// family/bank mismatch, empty dataset).
class ConfigurationError : public Error {
 public:
  explicit ConfigurationError(const std::string& what)
      : Error(ErrorKind::kConfiguration, what) {}
};

/// Metric cannot be evaluated on the given inputs.
class EvaluationError : public Error {
 public:
  explicit EvaluationError(const std::string& what)
      : Error(ErrorKind::kEvaluation, what) {}
};

}  // namespace lerf
