#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lohi {

// Base of every error the library raises on bad input or unsolvable problems.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input: files, SMILES, CSV rows, flag values.
class InputError : public Error {
 public:
  using Error::Error;
};

// No assignment satisfies the partition lower bounds.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// The search budget ran out before any feasible incumbent was found.
class TimeBudgetError : public Error {
 public:
  using Error::Error;
};

class SmilesError : public InputError {
 public:
  enum class Kind { kSyntax, kUnsupported, kDisconnected };

  SmilesError(Kind kind, std::size_t offset, const std::string& what)
      : InputError(what + " at offset " + std::to_string(offset)),
        kind_(kind),
        offset_(offset) {}

  Kind kind() const noexcept { return kind_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  Kind kind_;
  std::size_t offset_;
};

// Row-level failure while reading a delimited file; line numbers are 1-based
// and count the header as line 1.
class CsvError : public InputError {
 public:
  CsvError(std::size_t line, const std::string& what)
      : InputError("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace lohi
