#pragma once

#include <stdexcept>
#include <string>

namespace affectively {

// Action does not fit the environment's ActionSpec.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Call made in the wrong episode phase (step before reset, step after done).
class LifecycleError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Malformed map, level, track, corpus or checkpoint file.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Transition corpus could not be built (e.g. nothing left after discarding
// stable pairs).
class CorpusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid or inconsistent configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerical failure during training (non-finite loss or gradient).
class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace affectively
