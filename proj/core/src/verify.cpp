#include "qcholder/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <thread>
#include <tuple>

#include "qcholder/geometry.hpp"

namespace qcholder::verify {
namespace {

void require_K(double K, const char* what) {
  if (!std::isfinite(K) || !(K >= 1.0)) throw ParameterError(std::string(what) + ": K must be >= 1");
}

bool in_closed_disk(Complex z) { return std::abs(z) <= 1.0; }

struct Candidate {
  double quotient;
  Complex z;
  Complex w;
};

auto lex_key(const Candidate& c) { return std::make_tuple(c.z.real(), c.z.imag(), c.w.real(), c.w.imag()); }

// Larger quotient first; ties broken lexicographically on the pair so the
// order is total and independent of how the pass was split across threads.
bool better(const Candidate& a, const Candidate& b) {
  if (a.quotient != b.quotient) return a.quotient > b.quotient;
  return lex_key(a) < lex_key(b);
}

void keep_top(std::vector<Candidate>& top, const Candidate& c, std::size_t limit) {
  if (top.size() == limit && !better(c, top.back())) return;
  const auto pos = std::upper_bound(top.begin(), top.end(), c, better);
  top.insert(pos, c);
  if (top.size() > limit) top.pop_back();
}

std::vector<Complex> polar_points(const SearchBudget& b) {
  std::vector<Complex> pts;
  pts.reserve(static_cast<std::size_t>(b.radii - 1) * static_cast<std::size_t>(b.angles) + 1);
  pts.emplace_back(0.0, 0.0);
  for (int i = 1; i < b.radii; ++i) {
    const double r = b.boundary_radius * static_cast<double>(i) / static_cast<double>(b.radii - 1);
    for (int a = 0; a < b.angles; ++a) {
      const double t = 2.0 * std::numbers::pi * static_cast<double>(a) / static_cast<double>(b.angles);
      pts.push_back(std::polar(r, t));
    }
  }
  return pts;
}

std::vector<Candidate> coarse_pass(const std::vector<Complex>& pts, const std::vector<Complex>& vals, double K,
                                   std::size_t limit, unsigned threads) {
  const double expo = 1.0 / K;
  const double min_sep2 = kMinSeparation * kMinSeparation;
  auto worker = [&](unsigned t, unsigned stride, std::vector<Candidate>& top) {
    // Track squared quotients; convert the survivors at the end.
    for (std::size_t p = t; p < pts.size(); p += stride) {
      for (std::size_t q = p + 1; q < pts.size(); ++q) {
        const double d2 = std::norm(pts[p] - pts[q]);
        if (d2 < min_sep2) continue;
        const double num2 = std::norm(vals[p] - vals[q]);
        const double q2 = K == 1.0 ? num2 / d2 : num2 / std::pow(d2, expo);
        if (top.size() == limit && q2 < top.back().quotient) continue;
        keep_top(top, {q2, pts[p], pts[q]}, limit);
      }
    }
  };

  std::vector<std::vector<Candidate>> tops(threads);
  if (threads == 1) {
    worker(0, 1, tops[0]);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t, threads, std::ref(tops[t]));
    for (auto& th : pool) th.join();
  }
  std::vector<Candidate> merged;
  for (auto& t : tops) merged.insert(merged.end(), t.begin(), t.end());
  std::sort(merged.begin(), merged.end(), better);
  if (merged.size() > limit) merged.resize(limit);
  for (auto& c : merged) c.quotient = std::sqrt(c.quotient);
  return merged;
}

Candidate pattern_search(const DiscreteMap& f, double K, Candidate start, double step, int rounds) {
  std::array<double, 4> x{start.z.real(), start.z.imag(), start.w.real(), start.w.imag()};
  Candidate best = start;
  for (int round = 0; round < rounds; ++round) {
    bool improved = false;
    for (std::size_t c = 0; c < x.size(); ++c) {
      for (const double sign : {1.0, -1.0}) {
        auto trial = x;
        trial[c] += sign * step;
        const Complex z{trial[0], trial[1]};
        const Complex w{trial[2], trial[3]};
        if (!in_closed_disk(z) || !in_closed_disk(w) || std::abs(z - w) < kMinSeparation) continue;
        const double q = holder_quotient(f, z, w, K);
        if (q > best.quotient) {
          best = {q, z, w};
          x = trial;
          improved = true;
          break;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return best;
}

}  // namespace

double tolerance_for(const DiscreteMap& f) {
  return f.provenance() == MapProvenance::closed_form ? kClosedFormTolerance : kSolverTolerance;
}

double holder_quotient(const DiscreteMap& f, Complex z, Complex w, double K) {
  require_K(K, "holder_quotient");
  if (!is_finite(z) || !is_finite(w)) throw DomainError("holder_quotient: non-finite point");
  if (!in_closed_disk(z) || !in_closed_disk(w)) throw DomainError("holder_quotient: point outside the closed disk");
  const double d = std::abs(z - w);
  if (d < kMinSeparation) throw DomainError("holder_quotient: points closer than 1e-9");
  const double num = std::abs(f(z) - f(w));
  return K == 1.0 ? num / d : num / std::pow(d, 1.0 / K);
}

HolderReport estimate_holder_constant(const DiscreteMap& f, double K, const SearchBudget& budget) {
  require_K(K, "estimate_holder_constant");
  if (budget.radii < 2 || budget.angles < 1 || budget.top_pairs < 1 || budget.refine_rounds < 0)
    throw ParameterError("estimate_holder_constant: invalid search budget");
  if (!(budget.boundary_radius > 0.0 && budget.boundary_radius <= 1.0))
    throw ParameterError("estimate_holder_constant: boundary radius must lie in (0, 1]");

  const auto pts = polar_points(budget);
  std::vector<Complex> vals(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) vals[i] = f(pts[i]);

  unsigned threads = budget.threads != 0 ? budget.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(pts.size()));
  auto starts = coarse_pass(pts, vals, K, static_cast<std::size_t>(budget.top_pairs), threads);

  HolderReport report;
  std::vector<PointPair> seeds = budget.seeds;
  if (budget.use_map_candidates) {
    const auto& extra = f.traits().candidate_pairs;
    seeds.insert(seeds.end(), extra.begin(), extra.end());
  }
  for (const auto& s : seeds) {
    const double q = holder_quotient(f, s.z, s.w, K);
    report.seeded_quotient = std::max(report.seeded_quotient.value_or(0.0), q);
    starts.push_back({q, s.z, s.w});
  }

  const double step = budget.boundary_radius / static_cast<double>(budget.radii - 1);
  Candidate best{-1.0, {}, {}};
  for (const auto& s : starts) {
    const auto refined = pattern_search(f, K, s, step, budget.refine_rounds);
    if (best.quotient < 0.0 || better(refined, best)) best = refined;
  }

  report.map_name = f.name();
  report.K = K;
  report.witness = {best.z, best.w};
  report.constant_estimate = holder_quotient(f, best.z, best.w, K);
  report.bound = geometry::sharp_constant(K);
  report.radii = budget.radii;
  report.angles = budget.angles;
  report.top_pairs = budget.top_pairs;
  report.refine_rounds = budget.refine_rounds;
  report.tolerance = tolerance_for(f);
  report.violation = report.constant_estimate > report.bound * (1.0 + report.tolerance);
  return report;
}

HolderReport check_bound(const DiscreteMap& f, double K, const SearchBudget& budget, std::optional<double> tolerance) {
  auto report = estimate_holder_constant(f, K, budget);
  if (tolerance) {
    if (!(*tolerance >= 0.0)) throw ParameterError("check_bound: tolerance must be >= 0");
    report.tolerance = *tolerance;
  }
  report.violation = report.constant_estimate > report.bound * (1.0 + report.tolerance);
  return report;
}

ConstantsTable constants(double K) {
  require_K(K, "constants");
  const double e = 1.0 - 1.0 / K;
  ConstantsTable t{K, 16.0, std::exp2(4.0 * e), std::exp2(2.0 * e), 1.0};
  if (K > 1.0) {
    // 4^e 2^e K^{1/(2K)} (K/(K-1))^{e/2}, summed in base-2 logarithms.
    t.vz = std::exp2(3.0 * e + std::log2(K) / (2.0 * K) + 0.5 * e * std::log2(K / (K - 1.0)));
  }
  return t;
}

DilatationReport dilatation_estimate(const DiscreteMap& f, const GridSpec& spec, const DilatationOptions& options) {
  DilatationReport report;
  for (std::size_t j = 1; j + 1 < spec.n(); ++j) {
    for (std::size_t k = 1; k + 1 < spec.n(); ++k) {
      const Complex z = spec.point(j, k);
      const double r = std::abs(z);
      if (r > options.max_radius || r < options.min_radius) continue;
      const auto d = node_derivatives(f, spec, j, k);
      const double a = std::abs(d.fz);
      const double b = std::abs(d.fzbar);
      if (a <= options.derivative_floor || a <= b) {
        report.flagged.push_back(spec.index(j, k));
        continue;
      }
      ++report.samples;
      const double q = (a + b) / (a - b);
      if (q > report.max) {
        report.max = q;
        report.at = z;
      }
    }
  }
  return report;
}

std::vector<Complex> circle_samples(double radius, int count) {
  std::vector<Complex> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int i = 0; i < count; ++i)
    out.push_back(std::polar(radius, 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(count)));
  return out;
}

KoebeReport koebe_check(const BeltramiField& mu, double K, std::span<const Complex> lambdas, SolverOptions options) {
  for (const auto& lambda : lambdas) check_flow_parameter(mu, lambda, K);
  BeltramiSolver solver(mu.spec(), options);
  const auto& spec = mu.spec();
  KoebeReport report;
  for (const auto& lambda : lambdas) {
    const auto sol = solver.flow(mu, lambda, K);
    double local = 0.0;
    for (std::size_t j = 0; j < spec.n(); ++j) {
      for (std::size_t k = 0; k < spec.n(); ++k) {
        if (!(std::abs(spec.point(j, k)) < 1.0)) continue;
        const double v = std::abs(sol.map.node_value(j, k));
        local = std::max(local, v);
        if (v > report.max) {
          report.max = v;
          report.at_z = spec.point(j, k);
          report.at_lambda = lambda;
        }
      }
    }
    report.per_lambda.push_back(local);
  }
  return report;
}

double mean_value_defect(const std::function<DiscreteMap(Complex)>& flow, Complex z, Complex w, double radius,
                         int count) {
  if (count < 1) throw ParameterError("mean_value_defect: count must be >= 1");
  auto u = [&](Complex lambda) {
    const auto f = flow(lambda);
    return std::log(std::abs(f(z) - f(w)) / 4.0);
  };
  double sum = 0.0;
  for (const auto& lambda : circle_samples(radius, count)) sum += u(lambda);
  return std::abs(u(Complex{}) - sum / static_cast<double>(count));
}

HarnackRecord harnack_probe(const BeltramiField& mu, Complex z, Complex w, double K, const HarnackOptions& options) {
  if (!(K > 1.0)) throw ParameterError("harnack_probe: K must be > 1");
  if (!(std::abs(z) < 1.0) || !(std::abs(w) < 1.0)) throw DomainError("harnack_probe: points must lie in the open disk");
  if (std::abs(z - w) < kMinSeparation) throw DomainError("harnack_probe: coincident points");
  const double k = (K - 1.0) / (K + 1.0);
  check_flow_parameter(mu, Complex{k, 0.0}, K);
  check_flow_parameter(mu, Complex{options.circle_radius, 0.0}, K);

  BeltramiSolver solver(mu.spec(), options.solver);
  auto log_gap = [&](const DiscreteMap& f) { return std::log(std::abs(f(z) - f(w)) / 4.0); };

  HarnackRecord rec;
  rec.K = K;
  rec.u0 = std::log(std::abs(z - w) / 4.0);
  rec.uk_solver = log_gap(solver.flow(mu, Complex{k, 0.0}, K).map);
  if (const auto& principal = mu.principal_map()) {
    rec.uk = log_gap(*principal);
    rec.uk_from_principal_map = true;
  } else {
    rec.uk = rec.uk_solver;
  }
  rec.mean_value_defect = mean_value_defect(
      [&](Complex lambda) { return lambda == Complex{} ? maps::identity() : solver.flow(mu, lambda, K).map; }, z, w,
      options.circle_radius, options.circle_samples);
  return rec;
}

}  // namespace qcholder::verify
