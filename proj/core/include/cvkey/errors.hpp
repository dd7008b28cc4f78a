#pragma once

#include <stdexcept>
#include <string>

namespace cvkey {

// Invalid user-supplied parameter or configuration (CLI exit code 2).
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// Internal numerical-consistency failure: indefinite matrices, discriminants
// beyond tolerance, unusable solver brackets, inadequate Fock truncation
// (CLI exit code 3).
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

// A boundary solver found no positive key anywhere in its domain
// (CLI exit code 4).
class no_key_error : public std::runtime_error {
 public:
  explicit no_key_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cvkey
