#pragma once

#include <stdexcept>
#include <string>

namespace bshrink {

/// Invalid input: bad parameters, malformed files, broken model invariants.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// A numerical guard tripped in a way the computation cannot recover from
/// (degenerate design, empty split group, bona fide violation while sampling).
class GuardError : public std::runtime_error {
 public:
  explicit GuardError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace bshrink
