#include "qcholder/discrete_map.hpp"

#include <cmath>
#include <utility>

namespace qcholder {

DiscreteMap DiscreteMap::closed_form(Evaluator evaluator, Traits traits) {
  DiscreteMap m;
  m.evaluator_ = std::move(evaluator);
  m.traits_ = std::move(traits);
  return m;
}

DiscreteMap DiscreteMap::from_grid(GridField correction, std::string name) {
  DiscreteMap m;
  m.grid_ = std::make_shared<const GridField>(std::move(correction));
  m.traits_.name = std::move(name);
  m.traits_.principal = true;
  return m;
}

Complex DiscreteMap::operator()(Complex z) const {
  if (grid_) return z + grid_->interpolate(z);
  return evaluator_(z);
}

Complex DiscreteMap::node_value(std::size_t j, std::size_t k) const {
  if (!grid_) throw ParameterError("DiscreteMap::node_value: not a grid map");
  return grid_->spec().point(j, k) + (*grid_)(j, k);
}

namespace maps {

DiscreteMap identity() {
  return DiscreteMap::closed_form([](Complex z) { return z; }, {"identity", true, {}});
}

DiscreteMap extremal(const geometry::ExtremalParams& params) {
  DiscreteMap::Traits traits;
  traits.name = "extremal";
  traits.principal = true;
  traits.candidate_pairs.push_back(geometry::slit_endpoints(params));
  return DiscreteMap::closed_form([params](Complex z) { return geometry::extremal_plane_map(z, params); },
                                  std::move(traits));
}

DiscreteMap radial_stretch(double K) {
  if (!(K >= 1.0)) throw ParameterError("maps::radial_stretch: K must be >= 1");
  return DiscreteMap::closed_form(
      [K](Complex z) { return std::abs(z) >= 1.0 ? z : geometry::radial_stretch(z, K); },
      {"radial_stretch", true, {}});
}

DiscreteMap power_stretch(Complex beta) {
  if (!(beta.real() > 0.0)) throw ParameterError("maps::power_stretch: Re beta must be > 0");
  return DiscreteMap::closed_form(
      [beta](Complex z) {
        const double r = std::abs(z);
        if (r >= 1.0 || r == 0.0) return z;
        return z * std::exp((beta - 1.0) * std::log(r));
      },
      {"power_stretch", true, {}});
}

DiscreteMap constant_disk(Complex k) {
  if (!(std::abs(k) < 1.0)) throw ParameterError("maps::constant_disk: |k| must be < 1");
  return DiscreteMap::closed_form(
      [k](Complex z) { return std::abs(z) < 1.0 ? z + k * std::conj(z) : z + k / z; },
      {"constant_disk", true, {}});
}

DiscreteMap affine(Complex a, Complex b) {
  return DiscreteMap::closed_form([a, b](Complex z) { return a * z + b * std::conj(z); },
                                  {"affine", false, {}});
}

DiscreteMap ellipse_affine(double R) {
  return DiscreteMap::closed_form([R](Complex z) { return geometry::affine_to_ellipse(z, R); },
                                  {"ellipse_affine", false, {}});
}

}  // namespace maps

}  // namespace qcholder
