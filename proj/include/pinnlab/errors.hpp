#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pinnlab {

// Caller violated an API contract (wrong arity, foreign node, empty data).
class UsageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Division by an exactly-zero value inside the Taylor arithmetic.
class ArithmeticError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A non-finite value appeared. `where` is a layer or parameter index, or
// npos when no index applies.
class NumericError : public std::runtime_error {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  NumericError(const std::string& what, std::size_t where = npos)
      : std::runtime_error(what), where_(where) {}

  std::size_t where() const noexcept { return where_; }

 private:
  std::size_t where_;
};

}  // namespace pinnlab
