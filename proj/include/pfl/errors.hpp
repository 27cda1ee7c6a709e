#pragma once

#include <stdexcept>
#include <string>

namespace pfl {

// Shape or parameter mismatch between cooperating components.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller supplied a value outside an operation's domain.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed text or wire input. line() is 0 for non-line-oriented input.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what), line_(0) {}
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class NoInverseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EncodeOverflowError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A privacy protocol's preconditions were violated at run time (missing
// roster member, wrong party count, ...).
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised by the federation loop when a mechanism fails; carries the stage
// and client so the harness can report where the round aborted.
class MechanismError : public std::runtime_error {
 public:
  MechanismError(std::string stage, long client_id, const std::string& cause)
      : std::runtime_error("mechanism failure at stage '" + stage + "'" +
                           (client_id >= 0 ? " (client " + std::to_string(client_id) + ")"
                                           : std::string()) +
                           ": " + cause),
        stage_(std::move(stage)),
        client_id_(client_id) {}

  const std::string& stage() const { return stage_; }
  long client_id() const { return client_id_; }

 private:
  std::string stage_;
  long client_id_;
};

}  // namespace pfl
