#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace filab {

// Bad inputs: argument domain violations, malformed files, schema mismatches.
// The CLI maps these to exit code 1.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public ValidationError {
 public:
  DimensionMismatch(std::size_t expected, std::size_t got)
      : ValidationError("dimension mismatch: expected " + std::to_string(expected) +
                        ", got " + std::to_string(got)) {}
};

class SchemaError : public ValidationError {
 public:
  SchemaError(const std::string& what, std::string key)
      : ValidationError(what + " (key: " + key + ")"), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

// Numeric failures: quadrature non-convergence, solver bracket failures,
// domain overflow. The CLI maps these to exit code 2.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class QuadratureError : public NumericError {
 public:
  QuadratureError(const std::string& what, double achieved_rel_error)
      : NumericError(what + " (achieved relative error " +
                     std::to_string(achieved_rel_error) + ")"),
        achieved_(achieved_rel_error) {}
  double achieved_rel_error() const { return achieved_; }

 private:
  double achieved_;
};

class BracketError : public NumericError {
 public:
  using NumericError::NumericError;
};

class EnvelopeViolation : public NumericError {
 public:
  using NumericError::NumericError;
};

// Thrown by CountingOracle when a query would exceed the budget; carries the
// count at the moment of refusal (the count is not incremented).
class BudgetExhausted : public std::runtime_error {
 public:
  BudgetExhausted(std::uint64_t count, std::uint64_t budget)
      : std::runtime_error("oracle budget exhausted: " + std::to_string(count) +
                           " queries used, budget " + std::to_string(budget)),
        count_(count),
        budget_(budget) {}
  std::uint64_t count() const { return count_; }
  std::uint64_t budget() const { return budget_; }

 private:
  std::uint64_t count_;
  std::uint64_t budget_;
};

}  // namespace filab
