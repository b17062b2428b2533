#pragma once

#include <stdexcept>
#include <string>

namespace cwl {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A computation that would exceed a configured budget (enumeration size,
// precision cap). `needed` carries the quantity that was too large.
class ResourceError : public std::runtime_error {
 public:
  ResourceError(const std::string& what, std::string needed)
      : std::runtime_error(what), needed_(std::move(needed)) {}

  const std::string& needed() const noexcept { return needed_; }

 private:
  std::string needed_;
};

}  // namespace cwl
