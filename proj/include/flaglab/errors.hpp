#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace flaglab {

// Base of every error raised by the library. The CLI maps subclasses onto
// exit codes, so keep the hierarchy flat.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed user input: bad JSON, wrong shapes, det != 1, bad config values.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

class SingularMatrix : public Error {
 public:
  using Error::Error;
};

class RankDeficient : public Error {
 public:
  using Error::Error;
};

class NotLoxodromic : public Error {
 public:
  explicit NotLoxodromic(const std::string& what, std::ptrdiff_t index = -1)
      : Error(what), index_(index) {}
  // Generator index when raised from a certificate over a generator list.
  std::ptrdiff_t index() const { return index_; }

 private:
  std::ptrdiff_t index_;
};

class InsufficientBudget : public Error {
 public:
  using Error::Error;
};

class NotCertified : public Error {
 public:
  using Error::Error;
};

class ExactEntriesMissing : public Error {
 public:
  using Error::Error;
};

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class DedupUnavailable : public Error {
 public:
  using Error::Error;
};

class TooFewRecords : public Error {
 public:
  using Error::Error;
};

class MembershipUnverified : public Error {
 public:
  using Error::Error;
};

enum class Hypothesis { Separation, ImageBall, Lipschitz };

class HypothesisViolated : public Error {
 public:
  HypothesisViolated(Hypothesis which, const std::string& what)
      : Error(what), which_(which) {}
  Hypothesis which() const { return which_; }

 private:
  Hypothesis which_;
};

}  // namespace flaglab
