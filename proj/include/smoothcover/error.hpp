#pragma once

#include <stdexcept>
#include <string>

namespace smoothcover {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: dimensions, moduli, schema violations, out-of-range parameters.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// An operation needs a nonempty set (S, A, samples) and got an empty one.
class EmptyInput : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// A materialization would exceed the configured element cap (p^n, p^r, ...).
class CapExceeded : public Error {
 public:
  using Error::Error;
};

/// Lattice-point enumeration visited more nodes than its budget allows.
class EnumerationBudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// The requested quantity cannot be certified for this body/lattice.
class Unsupported : public Error {
 public:
  using Error::Error;
};

/// Covering dilate rho of the net lattice is not below 1.
class NoCoveringCertificate : public Error {
 public:
  using Error::Error;
};

/// (L, (1+rho)K) is not a packing, so the residue map would not be injective.
class NotAPacking : public Error {
 public:
  using Error::Error;
};

/// Two enumerated points of L/p landed on the same residue class.
class ResidueCollision : public Error {
 public:
  using Error::Error;
};

class NotFound : public Error {
 public:
  using Error::Error;
};

/// A parameter rule's hypothesis failed; the message names the inequality.
class HypothesisViolated : public Error {
 public:
  using Error::Error;
};

/// A parameter rule's prime interval is empty or exceeds the supported range.
class InfeasibleRange : public Error {
 public:
  using Error::Error;
};

/// b exceeds n / (2 log2 n).
class GateViolated : public HypothesisViolated {
 public:
  using HypothesisViolated::HypothesisViolated;
};

}  // namespace smoothcover
