#pragma once

#include <stdexcept>
#include <string>

namespace hallnet {

/// Base class for every error raised by the library. The category doubles as
/// the process exit status used by the command-line front end.
class Error : public std::runtime_error {
 public:
  enum class Category : int {
    kValidation = 1,
    kIo = 2,
    kNumerical = 3,
    kMismatch = 4,
  };

  Error(Category category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  Category category() const noexcept { return category_; }
  int exit_code() const noexcept { return static_cast<int>(category_); }

 private:
  Category category_;
};

/// Bad input data, configuration or precondition violation.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what)
      : Error(Category::kValidation, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(Category::kIo, what) {}
};

/// Divergence, singular systems, formulas evaluated outside their domain.
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what)
      : Error(Category::kNumerical, what) {}
};

/// Artifacts that cannot be combined (e.g. models fitted on different
/// normalizers).
class MismatchError : public Error {
 public:
  explicit MismatchError(const std::string& what)
      : Error(Category::kMismatch, what) {}
};

}  // namespace hallnet
