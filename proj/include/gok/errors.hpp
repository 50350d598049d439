// Copyright 2026 The gok-bounds Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GOK_ERRORS_HPP
#define GOK_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gok {

/// Broad failure class, used by the CLI to pick an exit code.
enum class ErrorCategory { validation, numerical, io };

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}
  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what)
      : Error(ErrorCategory::validation, what) {}
};

class DimensionMismatch : public Error {
 public:
  explicit DimensionMismatch(const std::string& what)
      : Error(ErrorCategory::validation, what) {}
};

class DegenerateSpectrum : public Error {
 public:
  explicit DegenerateSpectrum(const std::string& what)
      : Error(ErrorCategory::validation, what) {}
};

/// Raised when a bound is requested for a weight that coincides with a
/// neighbour; such bounds carry no information.
class DegenerateWeight : public Error {
 public:
  explicit DegenerateWeight(const std::string& what)
      : Error(ErrorCategory::validation, what) {}
};

/// The weight vector is neither strictly decreasing nor of the
/// "K distinct positive entries followed by zeros" form.
class ShapeViolation : public Error {
 public:
  explicit ShapeViolation(const std::string& what)
      : Error(ErrorCategory::validation, what) {}
};

class NotUnitary : public Error {
 public:
  explicit NotUnitary(const std::string& what)
      : Error(ErrorCategory::validation, what) {}
};

class EnumerationLimit : public Error {
 public:
  explicit EnumerationLimit(const std::string& what)
      : Error(ErrorCategory::validation, what) {}
};

/// Ensemble-energy error outside the window where the linear bounds apply.
class RegimeError : public Error {
 public:
  explicit RegimeError(const std::string& what)
      : Error(ErrorCategory::numerical, what) {}
};

class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, std::size_t iteration)
      : Error(ErrorCategory::numerical, what), iteration_(iteration) {}
  std::size_t iteration() const noexcept { return iteration_; }

 private:
  std::size_t iteration_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorCategory::io, what) {}
};

}  // namespace gok

#endif  // GOK_ERRORS_HPP
