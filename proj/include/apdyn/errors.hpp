#pragma once

#include <stdexcept>
#include <string>

namespace apdyn {

/// Argument outside an operation's domain (length mismatch, bad parameter).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A documented precondition of a solver was not met by the caller.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Fixed-point iteration failed to contract.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The forcing is too large for the contraction budget of an equilibrium.
class BudgetError : public PreconditionError {
 public:
  BudgetError(const std::string& what, double epsilon, double threshold)
      : PreconditionError(what), epsilon_(epsilon), threshold_(threshold) {}
  double epsilon() const { return epsilon_; }
  double threshold() const { return threshold_; }

 private:
  double epsilon_;
  double threshold_;
};

/// Time stepping produced a non-finite state.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double blowup_time)
      : std::runtime_error(what), blowup_time_(blowup_time) {}
  double blowup_time() const { return blowup_time_; }

 private:
  double blowup_time_;
};

/// Pullback sampling did not settle within the requested depths.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double previous, double last)
      : std::runtime_error(what), previous_(previous), last_(last) {}
  double previous_distance() const { return previous_; }
  double last_distance() const { return last_; }

 private:
  double previous_;
  double last_;
};

/// Malformed or out-of-range experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace apdyn
