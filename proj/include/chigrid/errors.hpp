#pragma once

#include <stdexcept>
#include <string>

namespace chigrid {

// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Numerical failures (CLI exit code 3).
class NumericalError : public Error {
public:
  using Error::Error;
};

class DomainError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

// Circulant embedding has too much negative spectral mass.
class EmbeddingNotPSD : public NumericalError {
public:
  using NumericalError::NumericalError;
};

// Requested grid spacing is finer than the simulation lattice.
class GridFinerThanMesh : public NumericalError {
public:
  using NumericalError::NumericalError;
};

class DegenerateZeroVector : public NumericalError {
public:
  using NumericalError::NumericalError;
};

// A joint-CDF constant falls outside its Fréchet bounds.
class FrechetViolation : public NumericalError {
public:
  using NumericalError::NumericalError;
};

// Configuration failures (CLI exit code 2).
class ConfigError : public Error {
public:
  using Error::Error;
};

class ParseError : public ConfigError {
public:
  using ConfigError::ConfigError;
};

class ValidationError : public ConfigError {
public:
  using ConfigError::ConfigError;
};

// Filesystem failures (CLI exit code 4).
class IoError : public Error {
public:
  using Error::Error;
};

} // namespace chigrid
