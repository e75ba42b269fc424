#include <cmath>
#include <limits>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "qcholder/geometry.hpp"

using namespace qcholder;
using namespace qcholder::geometry;
using doctest::Approx;

namespace {
constexpr double pi = std::numbers::pi;

double cdist(Complex a, Complex b) { return std::abs(a - b); }
}  // namespace

TEST_CASE("params derive semi-axes and target parameter") {
  for (double R : default_R_grid()) {
    // Squaring large semi-axes loses digits, so the check scales with their size.
    const double a = semi_major(R), b = semi_minor(R);
    CHECK(std::abs(a * a - b * b - 4.0) <= 4.0 * std::numeric_limits<double>::epsilon() * a * a);
    CHECK((a - b) * (a + b) == Approx(4.0).epsilon(1e-8));
    for (double K : default_K_grid()) {
      const ExtremalParams p(K, R);
      CHECK(p.r_prime() > 1.0);
      CHECK(p.r_prime() <= R);
    }
  }
  CHECK_THROWS_AS(ExtremalParams(0.9, 2.0), ParameterError);
  CHECK_THROWS_AS(ExtremalParams(2.0, 1.0), ParameterError);
  CHECK_THROWS_AS(ExtremalParams(2.0, std::nan("")), ParameterError);
}

TEST_CASE("ellipse region") {
  for (double R : {1.01, 2.0, 10.0, 1e4}) {
    const EllipseRegion e(R);
    CHECK(e.contains({2.0, 0.0}));
    CHECK(e.contains({-2.0, 0.0}));
    for (double t : {0.0, 0.3, 1.0, 2.5, 4.0}) {
      const Complex b = e.boundary_point(t);
      CHECK(e.focal_sum(b) == Approx(2.0 * semi_major(R)).epsilon(1e-14));
      CHECK(e.contains_closed(b));
    }
  }
}

TEST_CASE("joukowski examples") {
  CHECK(joukowski(1.0) == Complex(2.0, 0.0));
  CHECK(cdist(joukowski({0.0, 1.0}), 0.0) == 0.0);
  const double R = 2.0, t = pi / 3;
  const Complex expect{semi_major(R) * std::cos(t), semi_minor(R) * std::sin(t)};
  CHECK(cdist(joukowski(std::polar(R, t)), expect) < 1e-15);
  CHECK_THROWS_AS(joukowski(0.0), DomainError);
}

TEST_CASE("joukowski inverse examples and slit convention") {
  CHECK(cdist(joukowski_inv(2.0), 1.0) < 1e-15);
  CHECK(cdist(joukowski_inv(2.5), 2.0) < 1e-15);
  CHECK(cdist(joukowski_inv(0.0), Complex(0.0, 1.0)) < 1e-15);
  CHECK(cdist(joukowski_inv(0.0, SlitBranch::lower), Complex(0.0, -1.0)) < 1e-15);
  CHECK(cdist(joukowski_inv(-2.0), -1.0) < 1e-15);
  // Oracle: both quadratic roots are +-i; the convention picks Im >= 0.
  const auto [a, b] = oracle::joukowski_roots(0.0);
  CHECK(std::abs(std::abs(a.imag()) - 1.0L) < 1e-15L);
  CHECK(std::abs(a + b) < 1e-15L);
  for (double x : {-1.9, -0.4, 0.0, 1.3}) {
    CHECK(joukowski_inv(x).imag() >= 0.0);
    CHECK(joukowski_inv(x, SlitBranch::lower).imag() <= 0.0);
  }
}

TEST_CASE("property: joukowski round trip on |w| <= 10") {
  oracle::Gen gen(11);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const Complex w = gen.in_disk(10.0);
    const Complex z = joukowski_inv(w);
    CHECK(std::abs(z) >= 1.0 - 1e-15);
    worst = std::max(worst, cdist(joukowski(z), w) / std::max(std::abs(w), 1.0));
    const auto ref = oracle::joukowski_outer(w, true);
    CHECK(cdist(z, {static_cast<double>(ref.real()), static_cast<double>(ref.imag())}) < 1e-12 * std::abs(z));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("radial stretch") {
  const Complex u = std::polar(1.0, 0.7);
  CHECK(cdist(radial_stretch(u, 2.5), u) < 1e-15);
  CHECK(cdist(radial_stretch(4.0, 2.0), 2.0) < 1e-15);
  CHECK(radial_stretch(0.0, 3.0) == Complex{});
  CHECK_THROWS_AS(radial_stretch(1.0, 0.5), ParameterError);
  // Circles of radius r go to radius r^{1/K}.
  CHECK(std::abs(radial_stretch(std::polar(0.3, 2.0), 3.0)) == Approx(std::pow(0.3, 1.0 / 3.0)).epsilon(1e-14));

  const Complex z{1.0, 1.0};
  const Complex mu = radial_stretch_beltrami(z, 3.0);
  CHECK(std::abs(mu) == Approx(0.5).epsilon(1e-14));
  // Oracle: complex-step-free central differences of the stretch itself.
  const double d = 1e-5;
  const Complex fx = (radial_stretch(z + d, 3.0) - radial_stretch(z - d, 3.0)) / (2 * d);
  const Complex fy = (radial_stretch(z + Complex(0, d), 3.0) - radial_stretch(z - Complex(0, d), 3.0)) / (2 * d);
  const Complex fz = 0.5 * (fx - Complex(0, 1) * fy);
  const Complex fzb = 0.5 * (fx + Complex(0, 1) * fy);
  CHECK(cdist(fzb / fz, mu) < 1e-8);
}

TEST_CASE("affine map onto the ellipse") {
  CHECK(affine_to_ellipse(0.0, 2.0) == Complex{});
  const Complex v = affine_to_ellipse(1.0, 2.0);
  CHECK(cdist(v, 2.5) < 1e-15);
  CHECK(std::abs(v - 2.0) + std::abs(v + 2.0) == Approx(2 * 2.5).epsilon(1e-15));
  const Complex m = affine_to_ellipse({0.0, 1.0}, 2.0);
  CHECK(cdist(m, Complex(0.0, 1.5)) < 1e-15);
  CHECK(std::abs(m - 2.0) + std::abs(m + 2.0) == Approx(2 * 2.5).epsilon(1e-15));
  CHECK_THROWS_AS(affine_to_ellipse(0.5, 1.0), ParameterError);
  CHECK_THROWS_AS(affine_from_ellipse(0.5, 0.5), ParameterError);
  CHECK(affine_dilatation(std::sqrt(3.0)) == Approx(2.0).epsilon(1e-14));

  oracle::Gen gen(5);
  for (double R : default_R_grid()) {
    for (int i = 0; i < 1000; ++i) {
      const Complex z = gen.in_disk();
      CHECK(cdist(affine_from_ellipse(affine_to_ellipse(z, R), R), z) <= 1e-14);
      CHECK(EllipseRegion(R).contains_closed(affine_to_ellipse(z, R)));
    }
  }
}

TEST_CASE("ellipse deformation examples") {
  for (double K : {1.5, 2.0, 4.0}) {
    const ExtremalParams p(K, 10.0);
    CHECK(cdist(ellipse_deformation(2.0, p), 2.0) < 1e-14);
    CHECK(cdist(ellipse_deformation(-2.0, p), -2.0) < 1e-14);
    CHECK(cdist(ellipse_deformation(1.3, p), 1.3) < 1e-14);
    CHECK(cdist(ellipse_deformation(1.3, p, SlitBranch::lower), 1.3) < 1e-14);
    CHECK(cdist(oracle::ellipse_deformation(1.3, K, true), 1.3) < 1e-14);
    CHECK(cdist(oracle::ellipse_deformation(1.3, K, false), 1.3) < 1e-14);
  }
  const ExtremalParams p(2.0, 4.0);
  const double t = pi / 4;
  const Complex expect{semi_major(2.0) * std::cos(t), semi_minor(2.0) * std::sin(t)};
  const Complex got = ellipse_deformation(EllipseRegion(4.0).boundary_point(t), p);
  CHECK(cdist(got, expect) < 1e-13);
  CHECK(cdist(got, oracle::ellipse_deformation(EllipseRegion(4.0).boundary_point(t), 2.0)) < 1e-13);
  CHECK_THROWS_AS(ellipse_deformation({0.0, 4.0}, p), DomainError);
  CHECK(ellipse_deformation({1.0, 0.5}, ExtremalParams(1.0, 4.0)) == Complex(1.0, 0.5));
}

TEST_CASE("property: slit points are fixed under both branch conventions") {
  oracle::Gen gen(3);
  for (double K : default_K_grid()) {
    for (double R : default_R_grid()) {
      const ExtremalParams p(K, R);
      for (int i = 0; i < 1000; ++i) {
        const double x = gen.uniform(-2.0, 2.0);
        CHECK(cdist(ellipse_deformation(x, p, SlitBranch::upper), x) <= 1e-12);
        CHECK(cdist(ellipse_deformation(x, p, SlitBranch::lower), x) <= 1e-12);
      }
    }
  }
}

TEST_CASE("extremal disk map examples") {
  const ExtremalParams p(2.0, 100.0);
  CHECK(extremal_disk_map(0.0, p) == Complex{});
  const Complex u = std::polar(1.0, 1.1);
  for (double K : default_K_grid())
    for (double R : default_R_grid()) CHECK(extremal_disk_map(u, ExtremalParams(K, R)) == u);
  const Complex z = 2.0 / semi_major(100.0);
  const Complex f = extremal_disk_map(z, p);
  CHECK(f.real() == Approx(2.0 / 10.1).epsilon(1e-12));
  CHECK(f.real() == Approx(0.19802).epsilon(1e-5));
  CHECK(cdist(f, oracle::extremal(z, 2.0, 100.0)) < 1e-14);
  CHECK_THROWS_AS(extremal_disk_map(1.1, p), DomainError);
  CHECK(extremal_plane_map(1.5, p) == Complex(1.5));
  const auto ends = slit_endpoints(p);
  CHECK(ends.z.real() == Approx(2.0 / semi_major(100.0)).epsilon(1e-15));
  CHECK(ends.w == -ends.z);
}

TEST_CASE("property: containment, boundary identity, symmetry, oracle agreement") {
  oracle::Gen gen(17);
  for (double K : default_K_grid()) {
    for (double R : default_R_grid()) {
      const ExtremalParams p(K, R);
      double worst_boundary = 0.0;
      for (int i = 0; i < 1000; ++i) {
        const Complex u = std::polar(1.0, 2.0 * pi * i / 1000);
        worst_boundary = std::max(worst_boundary, cdist(extremal_disk_map(u, p), u));
      }
      CHECK(worst_boundary <= 1e-10);
      for (int i = 0; i < 500; ++i) {
        const Complex z = gen.in_disk();
        const Complex f = extremal_disk_map(z, p);
        CHECK(std::abs(f) <= 1.0 + 1e-12);
        CHECK(cdist(extremal_disk_map(std::conj(z), p), std::conj(f)) <= 1e-13);
        CHECK(cdist(extremal_disk_map(-z, p), -f) <= 1e-13);
        CHECK(cdist(f, oracle::extremal(z, K, R)) <= 1e-10);
      }
    }
  }
  // The containment property at full size on one parameter pair.
  const ExtremalParams p(4.0, 1e4);
  for (int i = 0; i < 10000; ++i) CHECK(std::abs(extremal_disk_map(gen.in_disk(), p)) <= 1.0 + 1e-12);
}

TEST_CASE("extremal quotient") {
  for (double R : default_R_grid()) CHECK(extremal_quotient(ExtremalParams(1.0, R)) == Approx(1.0).epsilon(1e-15));
  const ExtremalParams p(2.0, 100.0);
  const double q = extremal_quotient(p);
  CHECK(q == Approx(1.98030).epsilon(1e-5 / 1.98030));
  // Oracle: measure the quotient on the map itself.
  const double z = 2.0 / semi_major(100.0);
  const double measured = std::abs(oracle::extremal(z, 2.0, 100.0) - oracle::extremal(-z, 2.0, 100.0)) /
                          std::sqrt(2.0 * z);
  CHECK(q == Approx(measured).epsilon(1e-12));
  CHECK(extremal_quotient(ExtremalParams(2.0, 1e8)) == Approx(2.0).epsilon(1e-7));
}

TEST_CASE("property: quotient increases monotonically towards 4^{1-1/K}") {
  for (double K : {1.5, 2.0, 4.0, 10.0}) {
    double prev = 0.0;
    for (double R : default_R_grid()) {
      const double q = extremal_quotient(ExtremalParams(K, R));
      CHECK(q > prev);
      CHECK(q < sharp_constant(K));
      prev = q;
    }
    CHECK(extremal_quotient(ExtremalParams(K, 1e60)) == Approx(sharp_constant(K)).epsilon(1e-10));
  }
}

TEST_CASE("analytic dilatation bound") {
  const double b = analytic_dilatation_bound(ExtremalParams(2.0, 100.0));
  CHECK(b == Approx(2.0 * (10001.0 / 9999.0) * (101.0 / 99.0)).epsilon(1e-14));
  CHECK(b == Approx(2.0408).epsilon(1e-4));
  CHECK(analytic_dilatation_bound(ExtremalParams(3.0, 1e12)) == Approx(3.0).epsilon(1e-7));
  CHECK(sharp_constant(2.0) == 2.0);
  CHECK(sharp_constant(1.0) == 1.0);
}
