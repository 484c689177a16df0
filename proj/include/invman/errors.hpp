#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace invman {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class ConstantTermError : public Error {
 public:
  using Error::Error;
};

// A relation m . lambda = lambda_i (or the unstable mirror) holds exactly.
class ResonanceDetected : public Error {
 public:
  ResonanceDetected(std::vector<int> exponents, std::size_t component, const std::string& what)
      : Error(what), exponents_(std::move(exponents)), component_(component) {}

  [[nodiscard]] const std::vector<int>& exponents() const { return exponents_; }
  [[nodiscard]] std::size_t component() const { return component_; }

 private:
  std::vector<int> exponents_;
  std::size_t component_;
};

class OrderingViolation : public Error {
 public:
  using Error::Error;
};

class SignViolation : public Error {
 public:
  using Error::Error;
};

// An interval check straddles zero: neither certified nor refuted.
class InconclusiveInterval : public Error {
 public:
  using Error::Error;
};

class NonpositiveOmega : public Error {
 public:
  using Error::Error;
};

class OrderTooSmall : public Error {
 public:
  using Error::Error;
};

class DegenerateWindow : public Error {
 public:
  using Error::Error;
};

class TailDiverges : public Error {
 public:
  using Error::Error;
};

class MaxIterationsExceeded : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& msg)
      : Error("line " + std::to_string(line) + ": " + msg), line_(line) {}
  [[nodiscard]] std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace invman
