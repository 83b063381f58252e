#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace argus {

// Root of every error raised by the library. Callers that only need a
// diagnostic can catch this; the CLI and HTTP layers map subclasses to exit
// codes and status codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& message, std::size_t position)
      : Error(message + " at position " + std::to_string(position)), position_(position) {}

  // Zero-based byte offset into the parsed text.
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class UnknownAtom : public Error {
 public:
  explicit UnknownAtom(std::string atom)
      : Error("unknown atom '" + atom + "'"), atom_(std::move(atom)) {}
  const std::string& atom() const { return atom_; }

 private:
  std::string atom_;
};

class InvalidVocabulary : public Error {
 public:
  using Error::Error;
};

class VocabularyMismatch : public Error {
 public:
  VocabularyMismatch() : Error("operands are defined over different vocabularies") {}
  using Error::Error;
};

class VocabularyTooLarge : public Error {
 public:
  VocabularyTooLarge(std::size_t size, std::size_t limit)
      : Error("vocabulary of " + std::to_string(size) + " atoms exceeds enumeration bound " +
              std::to_string(limit)) {}
};

class PremiseSetTooLarge : public Error {
 public:
  PremiseSetTooLarge(std::size_t size, std::size_t cap)
      : Error("premise set of " + std::to_string(size) + " formulas exceeds cap " +
              std::to_string(cap)) {}
};

class InvalidMove : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class NonMonotoneGamma : public Error {
 public:
  NonMonotoneGamma(double gamma, double threshold)
      : Error("gamma " + std::to_string(gamma) +
              " is below the monotone inversion threshold " + std::to_string(threshold)) {}
};

class ConvergenceFailure : public Error {
 public:
  using Error::Error;
};

class InvalidDistribution : public Error {
 public:
  using Error::Error;
};

// Raised when an update would have to put positive mass on a side of the
// model partition that currently holds none.
class DegenerateUpdate : public Error {
 public:
  explicit DegenerateUpdate(const std::string& message,
                            std::optional<std::uint32_t> timestep = std::nullopt)
      : Error(timestep ? message + " (timestep " + std::to_string(*timestep) + ")" : message),
        detail_(message),
        timestep_(timestep) {}

  const std::string& detail() const { return detail_; }
  std::optional<std::uint32_t> timestep() const { return timestep_; }

  DegenerateUpdate at_timestep(std::uint32_t t) const { return DegenerateUpdate(detail_, t); }

 private:
  std::string detail_;
  std::optional<std::uint32_t> timestep_;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class MalformedTrace : public Error {
 public:
  using Error::Error;
};

class NoArgumentAvailable : public Error {
 public:
  NoArgumentAvailable() : Error("agent has no unused valid argument") {}
};

class LengthMismatch : public Error {
 public:
  using Error::Error;
};

class DegenerateInput : public Error {
 public:
  using Error::Error;
};

class InsufficientRounds : public Error {
 public:
  using Error::Error;
};

}  // namespace argus
