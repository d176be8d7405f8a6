#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pmon {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. Line and column are 1-based.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t line, std::size_t column, const std::string& message)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class ArityError : public Error {
 public:
  using Error::Error;
};

class UnknownSymbol : public Error {
 public:
  using Error::Error;
};

class TheoryError : public Error {
 public:
  using Error::Error;
};

class PositionOutOfRange : public Error {
 public:
  PositionOutOfRange(std::size_t position, std::size_t length)
      : Error("position v" + std::to_string(position) + " exceeds trace length " +
              std::to_string(length)),
        position_(position),
        length_(length) {}

  std::size_t position() const { return position_; }
  std::size_t length() const { return length_; }

 private:
  std::size_t position_;
  std::size_t length_;
};

class LengthMismatch : public Error {
 public:
  LengthMismatch(std::size_t expected, std::size_t actual)
      : Error("expected " + std::to_string(expected) + " input messages, got " +
              std::to_string(actual)),
        expected_(expected),
        actual_(actual) {}

  std::size_t expected() const { return expected_; }
  std::size_t actual() const { return actual_; }

 private:
  std::size_t expected_;
  std::size_t actual_;
};

class ResourceLimit : public Error {
 public:
  using Error::Error;
};

/// A frame refused its input.
class Rejected : public Error {
 public:
  Rejected(std::string who, std::size_t step, const std::string& equation)
      : Error(who + " rejects at step " + std::to_string(step) + ": " + equation + " fails"),
        who_(std::move(who)),
        step_(step) {}
  const std::string& who() const { return who_; }
  std::size_t step() const { return step_; }

 private:
  std::string who_;
  std::size_t step_;
};

/// A sent message that cannot be computed from the messages received before it.
class NotExecutable : public Error {
 public:
  NotExecutable(std::string strand, std::size_t step, std::string message)
      : Error(describe(strand, step, message)),
        strand_(std::move(strand)),
        step_(step),
        message_(std::move(message)) {}

  const std::string& strand() const { return strand_; }
  std::size_t step() const { return step_; }
  const std::string& message() const { return message_; }

  NotExecutable with_strand(std::string strand) const {
    return NotExecutable(std::move(strand), step_, message_);
  }

 private:
  static std::string describe(const std::string& strand, std::size_t step,
                              const std::string& message) {
    std::string out = "not executable: ";
    if (!strand.empty()) out += "strand " + strand + ", ";
    return out + "step " + std::to_string(step) + " cannot derive " + message;
  }

  std::string strand_;
  std::size_t step_;
  std::string message_;
};

}  // namespace pmon
