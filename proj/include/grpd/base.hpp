#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace grpd {

//! Index into an object or morphism table.
using Idx = std::uint32_t;

//! Sentinel for "no morphism" / "composition undefined here".
inline constexpr Idx UNDEFINED = std::numeric_limits<Idx>::max();

//! One named axiom violation together with a concrete witness.
struct Violation {
  std::string code;    // e.g. "AssociativityViolation"
  std::string detail;  // witness indices and the identity that fails
};

//! The full list of violations found by a validator.
struct Report {
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }

  void add(std::string code, std::string detail) {
    violations.push_back({std::move(code), std::move(detail)});
  }

  bool has(std::string_view code) const {
    for (auto const& v : violations) {
      if (v.code == code) {
        return true;
      }
    }
    return false;
  }

  std::string to_string() const {
    std::ostringstream os;
    for (auto const& v : violations) {
      os << v.code << ": " << v.detail << "\n";
    }
    return os.str();
  }
};

//! Outcome of a validator: a sealed value, or a report listing every failed
//! axiom instance. Never both.
template <typename T>
struct Validated {
  std::optional<T> value;
  Report report;

  bool ok() const noexcept { return value.has_value(); }

  T const& operator*() const {
    if (!value) {
      throw std::logic_error("validation failed:\n" + report.to_string());
    }
    return *value;
  }

  T const* operator->() const { return &**this; }
};

template <typename T>
Validated<T> valid(T value) {
  return Validated<T>{std::move(value), {}};
}

template <typename T>
Validated<T> invalid(Report report) {
  return Validated<T>{std::nullopt, std::move(report)};
}

//! Thrown when an explicit size cap would be silently exceeded.
struct CapExceededError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

//! Thrown when an operation is called outside its stated preconditions
//! (e.g. composing functors whose boundary groupoids do not match).
struct PreconditionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

namespace detail {

template <typename... Args>
std::string cat(Args&&... args) {
  std::ostringstream os;
  (os << ... << args);
  return os.str();
}

}  // namespace detail

}  // namespace grpd
