/**
 * @file errors.hpp
 * @brief Error types shared across the library.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace subknap {

/// Invalid input: malformed data, violated precondition, bad configuration.
class InputError : public std::runtime_error {
public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// Request exceeds a hard capacity limit (enumeration or table too large).
class CapacityError : public std::runtime_error {
public:
  explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace subknap
