#pragma once

#include <stdexcept>
#include <string>

namespace smallsum {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an instance does not satisfy the hypotheses of the theorem it
/// is being classified against. `clause()` names the first failing condition.
class HypothesisError : public Error {
 public:
  HypothesisError(std::string theorem, std::string clause)
      : Error(theorem + ": hypothesis failed: " + clause),
        theorem_(std::move(theorem)),
        clause_(std::move(clause)) {}

  const std::string& theorem() const noexcept { return theorem_; }
  const std::string& clause() const noexcept { return clause_; }

 private:
  std::string theorem_;
  std::string clause_;
};

}  // namespace smallsum
