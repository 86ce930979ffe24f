#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace hypercount {

/// Base class of every domain error raised by the library. `kind()` is a
/// stable snake_case tag used in machine-readable error output.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error("parse_error", what) {}
};

class MixedDegreeError : public Error {
 public:
  MixedDegreeError(int first, int second)
      : Error("mixed_degrees", "mixed degrees " + std::to_string(first) +
                                   " and " + std::to_string(second)),
        first_(first),
        second_(second) {}

  int first() const noexcept { return first_; }
  int second() const noexcept { return second_; }

 private:
  int first_;
  int second_;
};

class DimensionMismatch : public Error {
 public:
  explicit DimensionMismatch(const std::string& what)
      : Error("dimension_mismatch", what) {}
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what)
      : Error("invalid_argument", what) {}
};

class SingularTransform : public Error {
 public:
  SingularTransform() : Error("singular_transform", "transform matrix is singular") {}
};

class NotOnHypersurface : public Error {
 public:
  NotOnHypersurface() : Error("not_on_hypersurface", "point does not lie on the hypersurface") {}
};

class SingularPointError : public Error {
 public:
  SingularPointError()
      : Error("singular_point", "gradient vanishes at the point (singular point)") {}
};

class DependentPoints : public Error {
 public:
  DependentPoints() : Error("dependent_points", "points are linearly dependent") {}
};

class MethodInapplicable : public Error {
 public:
  explicit MethodInapplicable(const std::string& what)
      : Error("method_inapplicable", what) {}
};

class MemoryBudgetExceeded : public Error {
 public:
  explicit MemoryBudgetExceeded(const std::string& what)
      : Error("memory_budget_exceeded", what) {}
};

}  // namespace hypercount
