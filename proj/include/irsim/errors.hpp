#pragma once

#include <stdexcept>
#include <string>

namespace irsim {

/// Invalid or unreadable scenario configuration. `field()` names the
/// offending key when one is known.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& message, std::string field = {})
      : std::runtime_error(field.empty() ? message : field + ": " + message),
        field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// A numerical routine could not meet its accuracy contract, or a closed
/// form left its valid range.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace irsim
