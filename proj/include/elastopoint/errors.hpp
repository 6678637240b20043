#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace elastopoint {

// Bad arguments: invalid dimension, out-of-range index, mismatched sizes.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A point outside the closed unit box.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Weight evaluated exactly at a center with a negative exponent.
class PoleError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Structurally unusable matrix (zero diagonal, wrong shape for the operation).
class MatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Cholesky pivot <= 0.
class FactorizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Rate computation with a zero or negative error.
class DegenerateRateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A convergence study level failed to solve.
class StudyError : public std::runtime_error {
 public:
  StudyError(int n, const std::string& what)
      : std::runtime_error("level n=" + std::to_string(n) + ": " + what), n_(n) {}
  int level_n() const noexcept { return n_; }

 private:
  int n_;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace elastopoint
