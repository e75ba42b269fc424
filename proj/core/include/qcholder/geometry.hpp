#pragma once

// Closed-form maps of the ellipse-deformation family.
//
// The Joukowski map phi(z) = z + 1/z carries the annulus 1 < |z| < R onto the
// ellipse E_R minus the focal slit [-2, 2]. Conjugating the radial stretch
// rho(z) = z |z|^{1/K - 1} by phi gives a K-quasiconformal map
// g : E_R -> E_{R^{1/K}} fixing the foci, and pulling g back to the unit disk
// through the affine maps alpha_R gives the extremal selfmap f.

#include <vector>

#include "qcholder/types.hpp"

namespace qcholder::geometry {

inline double semi_major(double R) { return R + 1.0 / R; }
inline double semi_minor(double R) { return R - 1.0 / R; }

/// Parameters (K, R) of the extremal construction.
class ExtremalParams {
 public:
  /// Throws ParameterError unless K >= 1 and R > 1 (both finite).
  ExtremalParams(double K, double R);

  double K() const noexcept { return K_; }
  double R() const noexcept { return R_; }
  /// R' = R^{1/K}, the parameter of the target ellipse.
  double r_prime() const noexcept { return r_prime_; }
  bool is_identity() const noexcept { return K_ == 1.0; }

 private:
  double K_;
  double R_;
  double r_prime_;
};

/// The open ellipse |z - 2| + |z + 2| < 2 (R + 1/R).
class EllipseRegion {
 public:
  explicit EllipseRegion(double R);

  double R() const noexcept { return R_; }
  double focal_sum(Complex z) const;
  bool contains(Complex z) const;
  /// Closed ellipse, with a relative slack for round-off in the focal sum.
  bool contains_closed(Complex z, double rel_tol = 1e-12) const;
  Complex boundary_point(double theta) const;

 private:
  double R_;
};

/// Which preimage joukowski_inv returns on the slit (-2, 2), where both roots
/// lie on the unit circle.
enum class SlitBranch { upper, lower };

Complex joukowski(Complex z);

/// Root of z + 1/z = w with |z| >= 1. On the slit the root with Im z >= 0
/// (SlitBranch::upper) or Im z <= 0 (SlitBranch::lower) is returned; w = +-2
/// gives +-1.
Complex joukowski_inv(Complex w, SlitBranch branch = SlitBranch::upper);

/// rho(z) = z |z|^{1/K - 1}, rho(0) = 0.
Complex radial_stretch(Complex z, double K);

/// Beltrami coefficient of radial_stretch: ((a - 1)/(a + 1)) z / conj(z) with
/// a = 1/K; 0 at the origin.
Complex radial_stretch_beltrami(Complex z, double K);

/// alpha_R(x + iy) = (R + 1/R) x + i (R - 1/R) y, onto E_R from the unit disk.
Complex affine_to_ellipse(Complex z, double R);
Complex affine_from_ellipse(Complex w, double R);

/// Dilatation (R^2 + 1)/(R^2 - 1) of alpha_R.
double affine_dilatation(double R);

/// g = phi o rho o phi^{-1} on the closed ellipse E_R. Throws DomainError
/// outside the closed ellipse.
Complex ellipse_deformation(Complex w, const ExtremalParams& params,
                            SlitBranch branch = SlitBranch::upper);

/// f = alpha_{R'}^{-1} o g o alpha_R on the closed unit disk. Points on the
/// unit circle are returned unchanged; K = 1 is the identity.
Complex extremal_disk_map(Complex z, const ExtremalParams& params);

/// extremal_disk_map extended by the identity to the whole plane.
Complex extremal_plane_map(Complex z, const ExtremalParams& params);

/// The pair +-2/(R + 1/R) = alpha_R^{-1}(+-2): endpoints of the segment that f
/// stretches from length ~4/R to ~4/R'.
PointPair slit_endpoints(const ExtremalParams& params);

/// Hölder quotient of f at slit_endpoints:
/// (4 / (R' + 1/R')) / (4 / (R + 1/R))^{1/K}.
double extremal_quotient(const ExtremalParams& params);

/// K * kappa(R) * kappa(R'), an upper bound for the maximal dilatation of f.
double analytic_dilatation_bound(const ExtremalParams& params);

/// 4^{1 - 1/K}.
double sharp_constant(double K);

std::vector<double> default_K_grid();
std::vector<double> default_R_grid();

}  // namespace qcholder::geometry
