#pragma once

#include <stdexcept>

namespace mib {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unreadable or unwritable file.
class IoError : public Error {
 public:
  using Error::Error;
};

// A dataset with zero surviving records.
class EmptyDatasetError : public Error {
 public:
  using Error::Error;
};

// Invalid parameter or option combination.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A structure returned a result set that disagrees with the linear scan.
class VerificationError : public Error {
 public:
  using Error::Error;
};

}  // namespace mib
