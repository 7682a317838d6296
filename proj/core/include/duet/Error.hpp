#pragma once

#include <stdexcept>
#include <string>

namespace duet {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// An API call was made in a lifecycle phase that does not allow it.
class PhaseError : public Error {
public:
  using Error::Error;
};

/// Configuration could not be parsed or is inconsistent.
class ConfigError : public Error {
public:
  using Error::Error;
};

/// Transport, framing, or handshake failure.
class CommError : public Error {
public:
  using Error::Error;
};

} // namespace duet
