#pragma once

#include <stdexcept>
#include <string>

namespace crashdet {

// Bad user input: out-of-range parameters, malformed config, schema misuse.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Non-finite state coming out of the integrator.
class IntegrationError : public std::runtime_error {
 public:
  explicit IntegrationError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed on-disk data (CSV rows, manifests, artifacts).
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Model training could not complete (non-convergence, degenerate data).
class TrainingError : public std::runtime_error {
 public:
  explicit TrainingError(const std::string& what) : std::runtime_error(what) {}
};

// A pipeline stage was invoked before its prerequisites exist.
class StageError : public std::runtime_error {
 public:
  explicit StageError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace crashdet
