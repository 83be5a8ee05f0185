#pragma once

#include <stdexcept>
#include <string>

namespace gvb {

/// Invalid argument to a generator, metric or renderer.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input is well formed but outside what an operation supports
/// (directed graph for bridges, unlabeled graph for matching, ...).
class UnsupportedInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A connected component of a pattern graph is not a chain, clique or star.
class ClassificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed configuration, endpoint or fixture.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dataset generation could not satisfy its constraints, or a constructed
/// truth disagreed with the oracles.
class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gvb
