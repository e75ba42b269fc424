#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qcholder/beltrami.hpp"
#include "qcholder/discrete_map.hpp"

namespace qcholder::verify {

/// Closed-form maps are checked at 1e-6 relative, solver maps at 5e-3.
inline constexpr double kClosedFormTolerance = 1e-6;
inline constexpr double kSolverTolerance = 5e-3;
inline constexpr double kMinSeparation = 1e-9;

double tolerance_for(const DiscreteMap& f);

/// |f(z) - f(w)| / |z - w|^{1/K} for z, w in the closed unit disk.
double holder_quotient(const DiscreteMap& f, Complex z, Complex w, double K);

struct SearchBudget {
  int radii = 64;
  int angles = 128;
  double boundary_radius = 1.0 - 1e-6;
  int top_pairs = 10;
  int refine_rounds = 40;
  /// Extra starting pairs for the refinement; the map's own candidate pairs
  /// are added when use_map_candidates is set.
  std::vector<PointPair> seeds;
  bool use_map_candidates = true;
  /// Worker threads for the coarse pass; 0 picks hardware concurrency. The
  /// result does not depend on this value.
  unsigned threads = 0;
};

struct HolderReport {
  std::string map_name;
  double K = 1.0;
  std::optional<double> R;
  double constant_estimate = 0.0;
  PointPair witness{};
  double bound = 1.0;
  bool violation = false;
  double tolerance = 0.0;
  /// Best quotient over the seed pairs before refinement, when seeds exist.
  std::optional<double> seeded_quotient;
  int radii = 0;
  int angles = 0;
  int top_pairs = 0;
  int refine_rounds = 0;

  double ratio() const { return constant_estimate / bound; }
};

/// Largest Hölder quotient found by an all-pairs pass over a polar grid
/// followed by deterministic pattern search around the best pairs and the
/// seeds. The estimate is attained at the reported witness pair, so it is a
/// lower bound for the true supremum.
HolderReport estimate_holder_constant(const DiscreteMap& f, double K, const SearchBudget& budget = {});

/// estimate_holder_constant plus the violation flag against 4^{1-1/K}.
HolderReport check_bound(const DiscreteMap& f, double K, const SearchBudget& budget = {},
                         std::optional<double> tolerance = std::nullopt);

struct ConstantsTable {
  double K;
  double mori;
  double conjecture;
  double sharp;
  double vz;
};

/// Mori's 16, the conjectured 16^{1-1/K}, the sharp 4^{1-1/K}, and the
/// Vuorinen-Zhang planar constant (1 at K = 1 by continuity).
ConstantsTable constants(double K);

struct DilatationOptions {
  double max_radius = 0.95;
  double min_radius = 0.0;
  double derivative_floor = 1e-8;
};

struct DilatationReport {
  double max = 1.0;
  Complex at{};
  std::size_t samples = 0;
  /// Nodes with |f_z| <= floor or |f_z| <= |f_zbar|, excluded from the max.
  std::vector<std::size_t> flagged;
};

/// max (|f_z| + |f_zbar|)/(|f_z| - |f_zbar|) over grid nodes with
/// min_radius <= |z| <= max_radius, by central differences.
DilatationReport dilatation_estimate(const DiscreteMap& f, const GridSpec& spec, const DilatationOptions& options = {});

std::vector<Complex> circle_samples(double radius, int count);

struct KoebeReport {
  double max = 0.0;
  Complex at_z{};
  Complex at_lambda{};
  std::vector<double> per_lambda;
};

/// max |f^lambda(z)| over the sampled lambdas and grid nodes with |z| < 1.
KoebeReport koebe_check(const BeltramiField& mu, double K, std::span<const Complex> lambdas,
                        SolverOptions options = {});

struct HarnackOptions {
  double circle_radius = 0.3;
  int circle_samples = 16;
  SolverOptions solver{};
};

struct HarnackRecord {
  double K = 2.0;
  double u0 = 0.0;
  /// u at lambda = (K-1)/(K+1): from the coefficient's principal map when it
  /// has one (the principal solution is unique), otherwise from the solver.
  double uk = 0.0;
  double uk_solver = 0.0;
  bool uk_from_principal_map = false;
  double mean_value_defect = 0.0;

  double slack() const { return uk - u0 / K; }
  double solver_slack() const { return uk_solver - u0 / K; }
};

HarnackRecord harnack_probe(const BeltramiField& mu, Complex z, Complex w, double K,
                            const HarnackOptions& options = {});

/// |u(0) - mean of u over `count` points of |lambda| = radius| for
/// u(lambda) = log(|F_lambda(z) - F_lambda(w)| / 4).
double mean_value_defect(const std::function<DiscreteMap(Complex)>& flow, Complex z, Complex w, double radius,
                         int count);

}  // namespace qcholder::verify
