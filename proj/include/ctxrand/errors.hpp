#pragma once

#include <stdexcept>
#include <string>

namespace ctxrand {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad argument value or inconsistent sizes.
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain of a formula (e.g. theta_c = pi/2).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Input text could not be parsed.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Matrix handed to a factorization is not positive semidefinite.
class NotPsdError : public Error {
 public:
  using Error::Error;
};

// A verification step found the object invalid (automorphism, realization...).
class VerificationError : public Error {
 public:
  using Error::Error;
};

// Extraction would output more bits than the certified entropy allows.
class EntropyExhausted : public Error {
 public:
  using Error::Error;
};

}  // namespace ctxrand
