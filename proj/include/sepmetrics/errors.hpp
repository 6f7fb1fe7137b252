#pragma once

#include <stdexcept>
#include <string>

namespace sepmetrics {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Problems with files, encodings and configuration: the inputs could not be
/// turned into valid signals. The CLI maps these to exit code 2.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A metric or transform precondition was violated by otherwise readable
/// data. The CLI maps these to exit code 3.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class FormatError : public InputError {
 public:
  using InputError::InputError;
};

class IoError : public InputError {
 public:
  using InputError::InputError;
};

class EmptySignalError : public InputError {
 public:
  using InputError::InputError;
};

class SpecError : public InputError {
 public:
  using InputError::InputError;
};

class LengthMismatchError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class ZeroReferenceError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class ZeroEstimateError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class ZeroTargetError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class DegenerateSourcesError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class CountMismatchError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class SignalTooShortError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class InvalidArgumentError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

}  // namespace sepmetrics
