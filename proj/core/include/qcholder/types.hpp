#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace qcholder {

using Complex = std::complex<double>;

/// A point outside the domain of a map (z = 0 for the Joukowski map, |z| > 1
/// for a disk selfmap, coincident points in a Hölder quotient, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An invalid parameter (K < 1, R <= 1, a grid size that is not a power of
/// two, a coefficient with sup norm >= 1, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The Neumann iteration did not reach its tolerance within the iteration cap.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, int iterations, double last_increment)
      : std::runtime_error(what), iterations_(iterations), last_increment_(last_increment) {}

  int iterations() const noexcept { return iterations_; }
  double last_increment() const noexcept { return last_increment_; }

 private:
  int iterations_;
  double last_increment_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PointPair {
  Complex z;
  Complex w;
};

inline bool is_finite(Complex z) noexcept {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

}  // namespace qcholder
