#pragma once

#include <stdexcept>
#include <string>

namespace locnoise {

/// Precondition violated by the caller (bad shape, out-of-range parameter).
class ArgumentError : public std::invalid_argument {
 public:
  explicit ArgumentError(const std::string& what) : std::invalid_argument(what) {}
};

/// A file was readable but its contents do not follow the expected format.
class FormatError : public std::runtime_error {
 public:
  explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

/// A network's layer shapes do not chain. `layer_index` is zero-based.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::size_t layer_index, const std::string& what);

  std::size_t layer_index() const noexcept { return layer_index_; }

 private:
  std::size_t layer_index_;
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// Relative change against a zero baseline.
class UndefinedChangeError : public std::domain_error {
 public:
  explicit UndefinedChangeError(const std::string& what) : std::domain_error(what) {}
};

}  // namespace locnoise
