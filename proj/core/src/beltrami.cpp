#include "qcholder/beltrami.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace qcholder {
namespace {

// Nodes strictly inside the open unit disk; chi_D is sampled on |z| < 1.
bool in_open_disk(Complex z) { return std::abs(z) < 1.0; }

double unit_uniform(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

}  // namespace

BeltramiField::BeltramiField(GridField samples) : samples_(std::move(samples)) {
  const auto& spec = samples_.spec();
  const auto values = samples_.values();
  for (std::size_t i = 0; i < values.size(); ++i) {
    const Complex v = values[i];
    if (!is_finite(v)) throw ParameterError("BeltramiField: non-finite sample");
    if (v != Complex{} && std::abs(spec.point(i)) > 1.0)
      throw ParameterError("BeltramiField: coefficient must vanish outside the unit disk");
    sup_norm_ = std::max(sup_norm_, std::abs(v));
  }
  if (!(sup_norm_ < 1.0)) throw ParameterError("BeltramiField: sup norm must be < 1");
}

BeltramiField BeltramiField::with_principal_map(DiscreteMap map) const {
  BeltramiField copy = *this;
  copy.principal_map_ = std::move(map);
  return copy;
}

BeltramiField BeltramiField::scaled(Complex factor) const {
  GridField out = samples_;
  for (auto& v : out.values()) v *= factor;
  return BeltramiField(std::move(out));
}

BeltramiField constant_disk_coefficient(const GridSpec& spec, Complex k) {
  return BeltramiField(GridField::sample(spec, [k](Complex z) { return in_open_disk(z) ? k : Complex{}; }));
}

BeltramiField radial_stretch_coefficient(const GridSpec& spec, double K) {
  return BeltramiField(GridField::sample(
      spec, [K](Complex z) { return in_open_disk(z) ? geometry::radial_stretch_beltrami(z, K) : Complex{}; }));
}

BeltramiField power_stretch_coefficient(const GridSpec& spec, Complex beta) {
  const Complex c = (beta - 1.0) / (beta + 1.0);
  return BeltramiField(GridField::sample(spec, [c](Complex z) {
    if (!in_open_disk(z) || z == Complex{}) return Complex{};
    return c * (z / std::conj(z));
  }));
}

BeltramiField random_beltrami(std::uint64_t seed, double k_inf, int modes, const GridSpec& spec) {
  if (!(k_inf >= 0.0 && k_inf < 1.0)) throw ParameterError("random_beltrami: k_inf must lie in [0, 1)");
  if (modes < 1) throw ParameterError("random_beltrami: modes must be >= 1");
  if (k_inf == 0.0) return BeltramiField(GridField(spec));

  struct Mode {
    Complex amplitude;
    double p;
    double q;
  };
  std::mt19937_64 gen(seed);
  std::vector<Mode> terms;
  terms.reserve(static_cast<std::size_t>(modes));
  for (int m = 0; m < modes; ++m) {
    const double re = 2.0 * unit_uniform(gen) - 1.0;
    const double im = 2.0 * unit_uniform(gen) - 1.0;
    const double p = std::floor(9.0 * unit_uniform(gen)) - 4.0;
    const double q = std::floor(9.0 * unit_uniform(gen)) - 4.0;
    terms.push_back({{re, im}, p, q});
  }

  constexpr double cutoff_radius = 0.95;
  GridField field = GridField::sample(spec, [&](Complex z) {
    const double s = std::abs(z) / cutoff_radius;
    if (s >= 1.0) return Complex{};
    const double cutoff = std::exp(1.0 - 1.0 / (1.0 - s * s));
    Complex sum{};
    for (const auto& t : terms) {
      const double phase = 0.5 * std::numbers::pi * (t.p * z.real() + t.q * z.imag());
      sum += t.amplitude * Complex{std::cos(phase), std::sin(phase)};
    }
    return cutoff * sum;
  });
  const double peak = field.max_abs();
  if (peak == 0.0) throw ParameterError("random_beltrami: degenerate mode sum");
  const double scale = k_inf / peak;
  for (auto& v : field.values()) v *= scale;
  return BeltramiField(std::move(field));
}

BeltramiSolver::BeltramiSolver(const GridSpec& spec, SolverOptions options)
    : ops_(spec), options_(options) {
  if (!(options_.tolerance > 0.0) || options_.max_iterations < 1)
    throw ParameterError("BeltramiSolver: tolerance must be > 0 and max_iterations >= 1");
}

Solution BeltramiSolver::solve(const BeltramiField& mu) {
  if (!(mu.spec() == spec())) throw ParameterError("BeltramiSolver: coefficient grid does not match solver grid");
  return solve_samples(mu.samples());
}

Solution BeltramiSolver::flow(const BeltramiField& mu, Complex lambda, double K) {
  check_flow_parameter(mu, lambda, K);
  const Complex factor = lambda * (K + 1.0) / (K - 1.0);
  Solution s = solve(mu.scaled(factor));
  return s;
}

Solution BeltramiSolver::solve_samples(const GridField& mu) {
  const auto& spec = this->spec();
  const auto m = mu.values();
  std::vector<Complex> omega(m.begin(), m.end());
  std::vector<Complex> next(omega.size());

  Solution out{DiscreteMap::from_grid(GridField(spec)), GridField(spec), 0, 0.0, {}, {}};
  bool converged = false;
  while (out.iterations < options_.max_iterations) {
    ops_.beurling(omega, next);
    double inc = 0.0;
    double inc2 = 0.0;
    for (std::size_t i = 0; i < next.size(); ++i) {
      next[i] = m[i] * next[i] + m[i];
      const double d = std::norm(next[i] - omega[i]);
      inc = std::max(inc, d);
      inc2 += d;
    }
    omega.swap(next);
    ++out.iterations;
    out.final_increment = std::sqrt(inc);
    out.increments.push_back(out.final_increment);
    out.l2_increments.push_back(std::sqrt(inc2));
    if (out.final_increment < options_.tolerance) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw SolverError("principal_solution: Neumann iteration did not converge in " +
                          std::to_string(out.iterations) + " iterations",
                      out.iterations, out.final_increment);
  }

  GridField correction(spec);
  ops_.cauchy(omega, correction.values());
  out.omega = GridField(spec, std::move(omega));
  out.map = DiscreteMap::from_grid(std::move(correction));
  return out;
}

Solution principal_solution(const BeltramiField& mu, SolverOptions options) {
  BeltramiSolver solver(mu.spec(), options);
  return solver.solve(mu);
}

void check_flow_parameter(const BeltramiField& mu, Complex lambda, double K) {
  if (!(K > 1.0) || !std::isfinite(K)) throw ParameterError("flow_map: K must be > 1");
  if (!is_finite(lambda) || !(std::abs(lambda) < 1.0)) throw ParameterError("flow_map: |lambda| must be < 1");
  const double effective = std::abs(lambda) * mu.sup_norm() * (K + 1.0) / (K - 1.0);
  if (!(effective < 1.0))
    throw ParameterError("flow_map: effective coefficient norm " + std::to_string(effective) + " is not < 1");
}

Solution flow_map(const BeltramiField& mu, Complex lambda, double K, SolverOptions options) {
  check_flow_parameter(mu, lambda, K);
  BeltramiSolver solver(mu.spec(), options);
  return solver.flow(mu, lambda, K);
}

Derivatives node_derivatives(const DiscreteMap& f, const GridSpec& spec, std::size_t j, std::size_t k) {
  const double h = spec.spacing();
  Complex east, west, north, south;
  const GridField* grid = f.correction();
  if (grid != nullptr && grid->spec() == spec) {
    if (j == 0 || k == 0 || j + 1 >= spec.n() || k + 1 >= spec.n())
      throw DomainError("node_derivatives: node on the grid edge");
    east = f.node_value(j + 1, k);
    west = f.node_value(j - 1, k);
    north = f.node_value(j, k + 1);
    south = f.node_value(j, k - 1);
  } else {
    const Complex z = spec.point(j, k);
    east = f(z + h);
    west = f(z - h);
    north = f(z + Complex{0.0, h});
    south = f(z - Complex{0.0, h});
  }
  const Complex fx = (east - west) / (2.0 * h);
  const Complex fy = (north - south) / (2.0 * h);
  const Complex i{0.0, 1.0};
  return {0.5 * (fx - i * fy), 0.5 * (fx + i * fy)};
}

BeltramiEstimate estimate_beltrami(const DiscreteMap& f, const GridSpec& spec, double derivative_floor) {
  GridField mu(spec);
  std::vector<std::size_t> flagged;
  for (std::size_t j = 0; j < spec.n(); ++j) {
    for (std::size_t k = 0; k < spec.n(); ++k) {
      if (std::abs(spec.point(j, k)) > 1.0) continue;
      const auto d = node_derivatives(f, spec, j, k);
      if (std::abs(d.fz) <= derivative_floor) {
        flagged.push_back(spec.index(j, k));
        continue;
      }
      const Complex value = d.fzbar / d.fz;
      if (!(std::abs(value) < 1.0)) {
        flagged.push_back(spec.index(j, k));
        continue;
      }
      mu(j, k) = value;
    }
  }
  BeltramiField field(std::move(mu));
  if (f.traits().principal && f.provenance() == MapProvenance::closed_form) field = field.with_principal_map(f);
  return {std::move(field), std::move(flagged)};
}

bool ResidualRegion::contains(Complex z) const {
  const double r = std::abs(z);
  if (r > max_radius || std::abs(r - 1.0) < circle_band) return false;
  return std::none_of(singular_points.begin(), singular_points.end(),
                      [&](Complex p) { return std::abs(z - p) < singular_radius; });
}

ResidualReport equation_residual(const DiscreteMap& f, const GridField& mu, const ResidualRegion& region) {
  const auto& spec = mu.spec();
  ResidualReport report;
  for (std::size_t j = 1; j + 1 < spec.n(); ++j) {
    for (std::size_t k = 1; k + 1 < spec.n(); ++k) {
      const Complex z = spec.point(j, k);
      if (!region.contains(z)) continue;
      const auto d = node_derivatives(f, spec, j, k);
      const double r = std::abs(d.fzbar - mu(j, k) * d.fz);
      ++report.samples;
      if (r > report.max) {
        report.max = r;
        report.at = z;
      }
    }
  }
  return report;
}

}  // namespace qcholder
