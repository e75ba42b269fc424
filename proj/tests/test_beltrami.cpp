#include <cmath>
#include <numbers>
#include <thread>

#include "doctest.h"
#include "oracles.hpp"
#include "qcholder/beltrami.hpp"
#include "qcholder/verify.hpp"

using namespace qcholder;

namespace {

const GridSpec& grid512() {
  static const GridSpec g = default_grid();
  return g;
}

// Max |f - g| over nodes outside the annulus 0.9 < |z| < 1.1 (and away from
// extra points), restricted to |z| <= L - 1.
double max_error(const DiscreteMap& f, const std::function<Complex(Complex)>& exact, const GridSpec& g,
                 std::vector<Complex> avoid = {}, double avoid_radius = 0.05) {
  double err = 0.0;
  for (std::size_t j = 0; j < g.n(); ++j) {
    for (std::size_t k = 0; k < g.n(); ++k) {
      const Complex z = g.point(j, k);
      const double r = std::abs(z);
      if ((r > 0.9 && r < 1.1) || r > g.half_width() - 1.0) continue;
      bool skip = false;
      for (auto p : avoid) skip = skip || std::abs(z - p) < avoid_radius;
      if (skip) continue;
      err = std::max(err, std::abs(f.node_value(j, k) - exact(z)));
    }
  }
  return err;
}

Complex barrel(Complex z, Complex beta) {
  const double r = std::abs(z);
  if (r >= 1.0 || r == 0.0) return z;
  return z * std::exp((beta - 1.0) * std::log(r));
}

}  // namespace

TEST_CASE("coefficient field validation") {
  const GridSpec g(64, 2.0);
  CHECK_THROWS_AS(constant_disk_coefficient(g, 1.0), ParameterError);
  GridField outside(g);
  outside(0, 0) = 0.1;
  CHECK_THROWS_AS(BeltramiField{outside}, ParameterError);
  GridField nan(g);
  nan(32, 32) = std::nan("");
  CHECK_THROWS_AS(BeltramiField{nan}, ParameterError);
  const auto mu = constant_disk_coefficient(g, 0.3);
  CHECK(mu.sup_norm() == doctest::Approx(0.3));
  CHECK_THROWS_AS(mu.scaled(4.0), ParameterError);
}

TEST_CASE("random coefficients") {
  const auto& g = grid512();
  CHECK(random_beltrami(1, 0.0, 5, g).sup_norm() == 0.0);
  CHECK_THROWS_AS(random_beltrami(1, 1.0, 5, g), ParameterError);
  CHECK_THROWS_AS(random_beltrami(1, 0.5, 0, g), ParameterError);
  const auto a = random_beltrami(42, 0.4, 6, g);
  const auto b = random_beltrami(42, 0.4, 6, g);
  CHECK(std::equal(a.samples().values().begin(), a.samples().values().end(), b.samples().values().begin()));
  oracle::Gen gen(2024);
  for (int trial = 0; trial < 5; ++trial) {
    const auto seed = gen.next();
    const auto mu = random_beltrami(seed, 0.4, 1 + static_cast<int>(seed % 8), g);
    double max = 0.0;
    bool zero_outside = true;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const Complex v = mu.samples().values()[i];
      max = std::max(max, std::abs(v));
      if (std::abs(g.point(i)) >= 0.95) zero_outside = zero_outside && v == Complex{};
    }
    CHECK(std::abs(max - 0.4) <= 1e-12);
    CHECK(zero_outside);
  }
  const auto c = random_beltrami(43, 0.4, 6, g);
  CHECK_FALSE(std::equal(a.samples().values().begin(), a.samples().values().end(), c.samples().values().begin()));
}

TEST_CASE("zero coefficient gives the identity") {
  const auto sol = principal_solution(BeltramiField(GridField(grid512())));
  CHECK(sol.map.correction()->max_abs() == 0.0);
  CHECK(sol.map({0.3, -0.2}) == Complex(0.3, -0.2));
}

TEST_CASE("constant coefficient on the disk") {
  const auto sol = principal_solution(constant_disk_coefficient(grid512(), 0.3));
  CHECK(std::abs(sol.map(0.5) - 0.65) < 5e-3);
  const auto exact = maps::constant_disk(0.3);
  const double err = max_error(sol.map, [&](Complex z) { return exact(z); }, grid512());
  MESSAGE("constant coefficient error " << err << " after " << sol.iterations << " iterations");
  CHECK(err <= 1e-2);
  CHECK(equation_residual(sol.map, constant_disk_coefficient(grid512(), 0.3).samples()).max <= 5e-3);
}

TEST_CASE("radial stretch coefficient") {
  const auto mu = radial_stretch_coefficient(grid512(), 2.0);
  CHECK(std::abs(mu.samples()(300, 256) - Complex(-1.0 / 3.0)) < 1e-15);
  const auto sol = principal_solution(mu);
  CHECK(std::abs(sol.map(0.25) - 0.5) < 1e-2);
  const double err = max_error(sol.map, [](Complex z) { return barrel(z, 0.5); }, grid512());
  MESSAGE("radial coefficient error " << err);
  CHECK(err <= 1e-2);
}

TEST_CASE("property: Neumann iteration contracts in l2 with ratio <= k(1 + 0.05)") {
  oracle::Gen gen(77);
  BeltramiSolver solver(grid512());
  auto check_ratios = [](const Solution& s, double k, bool sup) {
    const auto& inc = sup ? s.increments : s.l2_increments;
    for (std::size_t m = 1; m + 1 < inc.size(); ++m) {
      if (inc[m] < 1e-12) break;
      CHECK(inc[m + 1] <= k * 1.05 * inc[m]);
    }
  };
  for (int trial = 0; trial < 3; ++trial) {
    const double k = gen.uniform(0.2, 0.6);
    const auto mu = random_beltrami(gen.next(), k, 2 + trial, grid512());
    const auto s = solver.solve(mu);
    check_ratios(s, k, false);
    check_ratios(s, k, true);
  }
  for (double k : {0.3, 0.5}) check_ratios(solver.solve(constant_disk_coefficient(grid512(), k)), k, false);
  check_ratios(solver.solve(radial_stretch_coefficient(grid512(), 3.0)), 0.5, false);
}

TEST_CASE("principal normalization decays like 1/z") {
  const auto mu = random_beltrami(5, 0.5, 4, grid512());
  const auto sol = principal_solution(mu);
  double fitted = 0.0;
  for (double r = 3.0; r <= 3.0 + 1e-12; r += 0.25)
    for (auto z : verify::circle_samples(r, 128)) fitted = std::max(fitted, std::abs(sol.map(z) - z) * std::abs(z));
  MESSAGE("fitted decay constant " << fitted);
  CHECK(fitted <= 2.0);
}

TEST_CASE("random coefficients solve with small residual") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto mu = random_beltrami(seed, 1.0 / 3.0, 6, grid512());
    const auto sol = principal_solution(mu);
    CHECK(equation_residual(sol.map, mu.samples()).max <= 5e-3);
  }
}

TEST_CASE("non-convergence reports the iteration count") {
  SolverOptions opts;
  opts.max_iterations = 2;
  try {
    principal_solution(constant_disk_coefficient(grid512(), 0.5).scaled(1.2), opts);
    FAIL("expected SolverError");
  } catch (const SolverError& e) {
    CHECK(e.iterations() == 2);
    CHECK(e.last_increment() > 0.0);
  }
}

TEST_CASE("flow parameters") {
  const auto mu = radial_stretch_coefficient(grid512(), 2.0);
  CHECK_THROWS_AS(check_flow_parameter(mu, 0.5, 1.0), ParameterError);
  CHECK_THROWS_AS(check_flow_parameter(mu, 1.0, 2.0), ParameterError);
  CHECK_THROWS_AS(check_flow_parameter(random_beltrami(1, 0.9, 2, grid512()), 0.9, 2.0), ParameterError);
  CHECK_NOTHROW(check_flow_parameter(mu, 0.9, 2.0));
  CHECK(flow_map(mu, 0.0, 2.0).map.correction()->max_abs() == 0.0);
}

TEST_CASE("radial flow at real lambda is the barrel map") {
  const auto mu = radial_stretch_coefficient(grid512(), 2.0);
  const double lambda = 0.2;
  const double alpha = (1.0 - lambda) / (1.0 + lambda);
  CHECK(alpha == doctest::Approx(2.0 / 3.0));
  const auto sol = flow_map(mu, lambda, 2.0);
  const double err = max_error(sol.map, [&](Complex z) { return barrel(z, alpha); }, grid512());
  MESSAGE("barrel error " << err);
  CHECK(err <= 1e-2);
  // Complex lambda turns the barrel into a spiral, also closed form.
  const Complex lc{0.1, 0.25};
  const auto spiral = flow_map(mu, lc, 2.0);
  const Complex beta = (1.0 - lc) / (1.0 + lc);
  CHECK(max_error(spiral.map, [&](Complex z) { return barrel(z, beta); }, grid512()) <= 1e-2);
}

TEST_CASE("flow at (K-1)/(K+1) recovers the extremal map") {
  const geometry::ExtremalParams p(2.0, 10.0);
  const auto f = maps::extremal(p);
  const auto est = estimate_beltrami(f, grid512());
  CHECK(est.flagged.empty());
  CHECK(est.field.principal_map().has_value());
  const auto sol = flow_map(est.field, 1.0 / 3.0, 2.0);
  const auto ends = geometry::slit_endpoints(p);
  const double err = max_error(sol.map, [&](Complex z) { return f(z); }, grid512(), {ends.z, ends.w});
  MESSAGE("flow consistency error " << err);
  CHECK(err <= verify::kSolverTolerance);
}

TEST_CASE("estimated coefficients") {
  const GridSpec g(128, 2.0);
  CHECK(estimate_beltrami(maps::identity(), g).field.sup_norm() == 0.0);
  const auto aff = estimate_beltrami(maps::affine(1.0, 0.3), g);
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (std::abs(g.point(i)) > 1.0) continue;
    worst = std::max(worst, std::abs(aff.field.samples().values()[i] - 0.3));
  }
  CHECK(worst <= 1e-12);

  const auto rad = estimate_beltrami(maps::radial_stretch(3.0), grid512());
  double dev = 0.0;
  for (std::size_t i = 0; i < grid512().size(); ++i) {
    const double r = std::abs(grid512().point(i));
    if (r < 0.25 || r > 0.95) continue;
    dev = std::max(dev, std::abs(std::abs(rad.field.samples().values()[i]) - 0.5));
  }
  MESSAGE("radial |mu| deviation " << dev);
  CHECK(dev <= 2e-3);

  const auto flat = DiscreteMap::closed_form([](Complex) { return Complex{}; }, {"constant", false, {}});
  const auto degenerate = estimate_beltrami(flat, g);
  CHECK(degenerate.flagged.size() > 0);
  CHECK(degenerate.field.sup_norm() == 0.0);
}

TEST_CASE("holomorphy probe along solver flows") {
  const auto mu = random_beltrami(11, 1.0 / 3.0, 4, grid512());
  BeltramiSolver solver(grid512());
  const double defect = verify::mean_value_defect(
      [&](Complex l) { return solver.flow(mu, l, 2.0).map; }, {0.4, 0.1}, {-0.3, -0.2}, 0.3, 16);
  MESSAGE("mean value defect " << defect);
  CHECK(defect <= 1e-3);
}

TEST_CASE("concurrent solves match serial solves") {
  const auto mu1 = random_beltrami(21, 0.4, 3, grid512());
  const auto mu2 = random_beltrami(22, 0.4, 3, grid512());
  const auto s1 = principal_solution(mu1);
  const auto s2 = principal_solution(mu2);
  std::optional<Solution> p1, p2;
  std::thread t1([&] { p1 = principal_solution(mu1); });
  std::thread t2([&] { p2 = principal_solution(mu2); });
  t1.join();
  t2.join();
  const auto eq = [](const Solution& a, const Solution& b) {
    const auto x = a.map.correction()->values();
    const auto y = b.map.correction()->values();
    return std::equal(x.begin(), x.end(), y.begin());
  };
  CHECK(eq(s1, *p1));
  CHECK(eq(s2, *p2));
}
