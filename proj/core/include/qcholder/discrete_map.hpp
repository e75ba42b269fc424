#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qcholder/geometry.hpp"
#include "qcholder/grid.hpp"

namespace qcholder {

/// Where a map's values come from; selects the tolerance class used when the
/// map is checked against a bound.
enum class MapProvenance { closed_form, solver };

/// A planar map with a uniform point-evaluation interface: either a
/// closed-form evaluator or grid samples of f(z) - z with bilinear
/// interpolation. Copies share the underlying evaluator or samples.
class DiscreteMap {
 public:
  using Evaluator = std::function<Complex(Complex)>;

  struct Traits {
    std::string name;
    /// The map is the identity outside the unit disk and solves the Beltrami
    /// equation for its own coefficient with principal normalization.
    bool principal = false;
    /// Pairs worth seeding a Hölder-constant search with.
    std::vector<PointPair> candidate_pairs;
  };

  static DiscreteMap closed_form(Evaluator evaluator, Traits traits);
  /// f(z) = z + correction(z).
  static DiscreteMap from_grid(GridField correction, std::string name = "solver");

  Complex operator()(Complex z) const;

  MapProvenance provenance() const noexcept { return grid_ ? MapProvenance::solver : MapProvenance::closed_form; }
  const Traits& traits() const noexcept { return traits_; }
  const std::string& name() const noexcept { return traits_.name; }

  /// Samples f - z for grid maps.
  const GridField* correction() const noexcept { return grid_.get(); }
  /// f at grid node (j, k) without interpolation (grid maps only).
  Complex node_value(std::size_t j, std::size_t k) const;

 private:
  DiscreteMap() = default;

  Evaluator evaluator_;
  std::shared_ptr<const GridField> grid_;
  Traits traits_;
};

namespace maps {

DiscreteMap identity();
/// Extremal selfmap of the disk, extended by the identity outside.
DiscreteMap extremal(const geometry::ExtremalParams& params);
/// z |z|^{1/K - 1} inside the disk glued to the identity outside.
DiscreteMap radial_stretch(double K);
/// z |z|^{beta - 1} inside the disk, identity outside; the principal solution
/// for the coefficient ((beta - 1)/(beta + 1)) z/conj(z) on the disk. Complex
/// beta with Re beta > 0 gives the spiral maps of the radial flow.
DiscreteMap power_stretch(Complex beta);
/// z + k conj(z) inside the disk, z + k/z outside: the principal solution for
/// the constant coefficient k on the disk.
DiscreteMap constant_disk(Complex k);
/// z -> a z + b conj(z) on the whole plane (not principal).
DiscreteMap affine(Complex a, Complex b);
/// alpha_R as a map of the plane.
DiscreteMap ellipse_affine(double R);

}  // namespace maps

}  // namespace qcholder
