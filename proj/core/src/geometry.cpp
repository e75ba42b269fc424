#include "qcholder/geometry.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace qcholder::geometry {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_finite(Complex z, const char* what) {
  if (!is_finite(z)) throw DomainError(std::string(what) + ": non-finite point");
}

void require_ellipse_parameter(double R, const char* what) {
  if (!std::isfinite(R) || !(R > 1.0))
    throw ParameterError(std::string(what) + ": ellipse parameter R must be > 1");
}

void require_dilatation(double K, const char* what) {
  if (!std::isfinite(K) || !(K >= 1.0))
    throw ParameterError(std::string(what) + ": dilatation K must be >= 1");
}

}  // namespace

ExtremalParams::ExtremalParams(double K, double R) : K_(K), R_(R) {
  require_dilatation(K, "ExtremalParams");
  require_ellipse_parameter(R, "ExtremalParams");
  r_prime_ = K == 1.0 ? R : std::pow(R, 1.0 / K);
}

EllipseRegion::EllipseRegion(double R) : R_(R) { require_ellipse_parameter(R, "EllipseRegion"); }

double EllipseRegion::focal_sum(Complex z) const { return std::abs(z - 2.0) + std::abs(z + 2.0); }

bool EllipseRegion::contains(Complex z) const { return focal_sum(z) < 2.0 * semi_major(R_); }

bool EllipseRegion::contains_closed(Complex z, double rel_tol) const {
  return focal_sum(z) <= 2.0 * semi_major(R_) * (1.0 + rel_tol);
}

Complex EllipseRegion::boundary_point(double theta) const {
  return {semi_major(R_) * std::cos(theta), semi_minor(R_) * std::sin(theta)};
}

Complex joukowski(Complex z) {
  require_finite(z, "joukowski");
  if (z == Complex{}) throw DomainError("joukowski: z = 0 is a pole");
  return z + 1.0 / z;
}

Complex joukowski_inv(Complex w, SlitBranch branch) {
  require_finite(w, "joukowski_inv");
  // z^2 - w z + 1 = 0. Taking s aligned with w makes (w + s)/2 the root of
  // larger modulus with no cancellation; the other root is its reciprocal.
  Complex s = std::sqrt((w - 2.0) * (w + 2.0));
  const double align = (std::conj(w) * s).real();
  if (align < 0.0) {
    s = -s;
  } else if (align == 0.0) {
    // Both roots on the unit circle.
    const bool flip = branch == SlitBranch::upper ? s.imag() < 0.0 : s.imag() > 0.0;
    if (flip) s = -s;
  }
  return 0.5 * (w + s);
}

Complex radial_stretch(Complex z, double K) {
  require_dilatation(K, "radial_stretch");
  require_finite(z, "radial_stretch");
  if (z == Complex{} || K == 1.0) return z;
  return z * std::pow(std::abs(z), 1.0 / K - 1.0);
}

Complex radial_stretch_beltrami(Complex z, double K) {
  require_dilatation(K, "radial_stretch_beltrami");
  require_finite(z, "radial_stretch_beltrami");
  if (z == Complex{}) return {};
  const double a = 1.0 / K;
  return ((a - 1.0) / (a + 1.0)) * (z / std::conj(z));
}

Complex affine_to_ellipse(Complex z, double R) {
  require_ellipse_parameter(R, "affine_to_ellipse");
  require_finite(z, "affine_to_ellipse");
  return {semi_major(R) * z.real(), semi_minor(R) * z.imag()};
}

Complex affine_from_ellipse(Complex w, double R) {
  require_ellipse_parameter(R, "affine_from_ellipse");
  require_finite(w, "affine_from_ellipse");
  return {w.real() / semi_major(R), w.imag() / semi_minor(R)};
}

double affine_dilatation(double R) {
  require_ellipse_parameter(R, "affine_dilatation");
  return (R * R + 1.0) / (R * R - 1.0);
}

Complex ellipse_deformation(Complex w, const ExtremalParams& params, SlitBranch branch) {
  require_finite(w, "ellipse_deformation");
  if (!EllipseRegion(params.R()).contains_closed(w))
    throw DomainError("ellipse_deformation: point outside the closed ellipse E_R");
  if (params.is_identity()) return w;
  const Complex zeta = joukowski_inv(w, branch);
  return joukowski(radial_stretch(zeta, params.K()));
}

Complex extremal_disk_map(Complex z, const ExtremalParams& params) {
  require_finite(z, "extremal_disk_map");
  const double r = std::abs(z);
  if (r > 1.0 + 1e-12) throw DomainError("extremal_disk_map: |z| > 1");
  if (params.is_identity() || std::abs(r - 1.0) <= 4.0 * kEps) return z;
  const Complex w = affine_to_ellipse(z, params.R());
  return affine_from_ellipse(ellipse_deformation(w, params), params.r_prime());
}

Complex extremal_plane_map(Complex z, const ExtremalParams& params) {
  require_finite(z, "extremal_plane_map");
  if (std::abs(z) >= 1.0) return z;
  return extremal_disk_map(z, params);
}

PointPair slit_endpoints(const ExtremalParams& params) {
  const double x = 2.0 / semi_major(params.R());
  return {Complex{x, 0.0}, Complex{-x, 0.0}};
}

double extremal_quotient(const ExtremalParams& params) {
  if (params.is_identity()) return 1.0;
  const double image = 4.0 / semi_major(params.r_prime());
  const double source = 4.0 / semi_major(params.R());
  return image / std::pow(source, 1.0 / params.K());
}

double analytic_dilatation_bound(const ExtremalParams& params) {
  return params.K() * affine_dilatation(params.R()) * affine_dilatation(params.r_prime());
}

double sharp_constant(double K) {
  require_dilatation(K, "sharp_constant");
  return std::exp2(2.0 * (1.0 - 1.0 / K));
}

std::vector<double> default_K_grid() { return {1.0, 1.5, 2.0, 4.0, 10.0}; }

std::vector<double> default_R_grid() { return {10.0, 100.0, 1000.0, 10000.0}; }

}  // namespace qcholder::geometry
