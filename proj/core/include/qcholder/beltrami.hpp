#pragma once

// Principal solutions of f_zbar = mu f_z for coefficients supported in the
// unit disk. With omega = f_zbar the equation becomes
//
//   omega = mu S[omega] + mu,   f = z + C[omega],
//
// which is solved by Neumann iteration; the iteration contracts with ratio
// ||mu||_inf in ℓ2 because S is an ℓ2 isometry.

#include <cstdint>
#include <optional>
#include <vector>

#include "qcholder/discrete_map.hpp"
#include "qcholder/grid.hpp"
#include "qcholder/transforms.hpp"

namespace qcholder {

/// Coefficient samples with sup norm < 1 that vanish outside the closed unit
/// disk.
class BeltramiField {
 public:
  explicit BeltramiField(GridField samples);

  const GridField& samples() const noexcept { return samples_; }
  const GridSpec& spec() const noexcept { return samples_.spec(); }
  /// Largest sample modulus (the k_inf of the field).
  double sup_norm() const noexcept { return sup_norm_; }

  /// Closed-form principal map this coefficient was estimated from, if any.
  const std::optional<DiscreteMap>& principal_map() const noexcept { return principal_map_; }
  BeltramiField with_principal_map(DiscreteMap map) const;

  /// Coefficient factor * mu. Throws ParameterError if the result has norm >= 1.
  BeltramiField scaled(Complex factor) const;

 private:
  GridField samples_;
  double sup_norm_ = 0.0;
  std::optional<DiscreteMap> principal_map_;
};

/// k on the open unit disk, zero elsewhere.
BeltramiField constant_disk_coefficient(const GridSpec& spec, Complex k);
/// Coefficient of the radial stretch z|z|^{1/K-1} on the open disk.
BeltramiField radial_stretch_coefficient(const GridSpec& spec, double K);
/// Coefficient of z|z|^{beta-1} on the open disk: ((beta-1)/(beta+1)) z/conj(z).
BeltramiField power_stretch_coefficient(const GridSpec& spec, Complex beta);

/// Smooth pseudo-random coefficient: a sum of `modes` Fourier modes with
/// seeded amplitudes, times a cutoff vanishing for |z| >= 0.95, rescaled so the
/// largest sample modulus is exactly k_inf. Deterministic for a given seed.
BeltramiField random_beltrami(std::uint64_t seed, double k_inf, int modes,
                              const GridSpec& spec = default_grid());

struct SolverOptions {
  double tolerance = 1e-10;
  int max_iterations = 200;
};

struct Solution {
  DiscreteMap map;
  GridField omega;
  int iterations = 0;
  double final_increment = 0.0;
  /// sup-norm and ℓ2 norm of omega_{m+1} - omega_m per step.
  std::vector<double> increments;
  std::vector<double> l2_increments;
};

/// Reusable solver for one grid. Owns FFT scratch; one instance per thread.
class BeltramiSolver {
 public:
  explicit BeltramiSolver(const GridSpec& spec, SolverOptions options = {});

  const GridSpec& spec() const noexcept { return ops_.spec(); }
  const SolverOptions& options() const noexcept { return options_; }

  Solution solve(const BeltramiField& mu);
  /// Principal solution for lambda * mu * (K + 1)/(K - 1).
  Solution flow(const BeltramiField& mu, Complex lambda, double K);

 private:
  Solution solve_samples(const GridField& mu);

  SpectralOperators ops_;
  SolverOptions options_;
};

Solution principal_solution(const BeltramiField& mu, SolverOptions options = {});
Solution flow_map(const BeltramiField& mu, Complex lambda, double K, SolverOptions options = {});

/// Throws ParameterError unless K > 1, |lambda| < 1 and the effective
/// coefficient norm |lambda| ||mu|| (K+1)/(K-1) is below 1.
void check_flow_parameter(const BeltramiField& mu, Complex lambda, double K);

struct Derivatives {
  Complex fz;
  Complex fzbar;
};

/// Central differences of f at grid node (j, k) with the grid spacing. Grid
/// maps on the same grid use their node values directly.
Derivatives node_derivatives(const DiscreteMap& f, const GridSpec& spec, std::size_t j, std::size_t k);

struct BeltramiEstimate {
  BeltramiField field;
  /// Flat indices of samples with |f_z| <= floor or |mu| >= 1; stored as 0.
  std::vector<std::size_t> flagged;
};

/// mu = f_zbar / f_z by central differences on the closed unit disk, zero
/// outside it. A closed-form principal f is attached as the field's
/// principal_map.
BeltramiEstimate estimate_beltrami(const DiscreteMap& f, const GridSpec& spec, double derivative_floor = 1e-8);

/// Where equation residuals are measured: |z| <= max_radius, at least
/// circle_band away from the unit circle, and at least singular_radius away
/// from every point in singular_points.
struct ResidualRegion {
  double max_radius = 0.9;
  double circle_band = 0.05;
  std::vector<Complex> singular_points;
  double singular_radius = 0.05;

  bool contains(Complex z) const;
};

struct ResidualReport {
  double max = 0.0;
  Complex at{};
  std::size_t samples = 0;
};

/// max |f_zbar - mu f_z| over the region, derivatives by central differences.
ResidualReport equation_residual(const DiscreteMap& f, const GridField& mu, const ResidualRegion& region = {});

}  // namespace qcholder
