#pragma once

#include <stdexcept>
#include <string>

namespace conevort {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A time or point lies outside the domain of a transform (t >= rho, sigma < 0).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A transformed point does not lie in the open cone cross-section.
class OutsideConeError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Non-finite or out-of-range input values.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration (grid sizes, step sizes, config files).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A non-finite value appeared while stepping the scheme.
class InstabilityError : public Error {
 public:
  InstabilityError(const std::string& what, double t0, double t1, int iteration)
      : Error(what), t0_(t0), t1_(t1), iteration_(iteration) {}

  double t0() const { return t0_; }
  double t1() const { return t1_; }
  int iteration() const { return iteration_; }

 private:
  double t0_;
  double t1_;
  int iteration_;
};

/// The Picard iteration stopped contracting (last increment ratio >= 1).
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, double t, double ratio)
      : Error(what), t_(t), ratio_(ratio) {}

  double t() const { return t_; }
  double ratio() const { return ratio_; }

 private:
  double t_;
  double ratio_;
};

}  // namespace conevort
