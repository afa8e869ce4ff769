// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace seqaug {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Operand lengths or shapes disagree.
class DimensionError : public Error {
public:
  using Error::Error;
};

/// A selector family leaves at least one index uncovered.
class CoverageError : public Error {
public:
  using Error::Error;
};

class EnumerationTooLarge : public Error {
public:
  using Error::Error;
};

/// Transport between empirical distributions of different sizes.
class UnsupportedMarginals : public Error {
public:
  using Error::Error;
};

class InvalidConfig : public Error {
public:
  using Error::Error;
};

/// Input data could not be parsed or failed validation.
class DataError : public Error {
public:
  using Error::Error;
};

/// An optimizer produced a non-finite loss.
class DivergenceError : public Error {
public:
  using Error::Error;
};

} // namespace seqaug
