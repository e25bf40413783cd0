#pragma once

#include <stdexcept>
#include <string>

namespace mmgate {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Mathieu parameters outside the first stability region.
class UnstableRegion : public Error {
 public:
  UnstableRegion(double a, double q, const std::string& where = "");
  double a() const { return a_; }
  double q() const { return q_; }

 private:
  double a_;
  double q_;
};

class NonConvergence : public Error {
 public:
  using Error::Error;
};

class CollisionDetected : public Error {
 public:
  using Error::Error;
};

class CoincidentIons : public Error {
 public:
  using Error::Error;
};

class ResonantDrive : public Error {
 public:
  using Error::Error;
};

class ImaginaryFrequency : public Error {
 public:
  using Error::Error;
};

class AmbiguousMatching : public Error {
 public:
  using Error::Error;
};

class InfeasiblePhase : public Error {
 public:
  using Error::Error;
};

class TruncationTooSmall : public Error {
 public:
  using Error::Error;
};

class Runaway : public Error {
 public:
  using Error::Error;
};

class NoSettle : public Error {
 public:
  using Error::Error;
};

}  // namespace mmgate
