#include "cli.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <ostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "qcholder/beltrami.hpp"
#include "qcholder/geometry.hpp"
#include "qcholder/report.hpp"
#include "qcholder/verify.hpp"

namespace qcholder::cli {
namespace {

using Json = nlohmann::ordered_json;
using report::format_number;

constexpr double kResidualTolerance = 5e-3;

Json number(double x) {
  if (!std::isfinite(x)) return nullptr;
  if (x == std::trunc(x) && std::abs(x) < 9.0e15) return static_cast<std::int64_t>(x);
  return x;
}

Json point(Complex z) { return Json::array({number(z.real()), number(z.imag())}); }

std::string dump(const Json& j) { return j.dump(2) + '\n'; }

std::string join(std::initializer_list<std::string> fields) {
  std::string out;
  for (const auto& f : fields) {
    if (!out.empty()) out += ',';
    out += f;
  }
  return out + '\n';
}

double first_or(const std::vector<double>& v, double fallback) { return v.empty() ? fallback : v.front(); }

double default_K(const RunConfig& c) { return first_or(c.K, 2.0); }
double default_R(const RunConfig& c) { return first_or(c.R, 100.0); }

bool one_of(const std::string& s, std::initializer_list<const char*> options) {
  for (const auto* o : options)
    if (s == o) return true;
  return false;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ParameterError(message);
}

SolverOptions solver_options(const RunConfig& c) {
  SolverOptions o;
  if (c.solver_tolerance) o.tolerance = *c.solver_tolerance;
  o.max_iterations = c.max_iterations;
  return o;
}

struct Coefficient {
  BeltramiField field;
  std::size_t flagged = 0;
  std::vector<Complex> singular_points;
};

Coefficient build_coefficient(const RunConfig& c, const GridSpec& spec) {
  const double K = default_K(c);
  if (c.mu == "random") {
    const double kinf = c.kinf.value_or((K - 1.0) / (K + 1.0));
    return {random_beltrami(c.seed, kinf, c.modes, spec), 0, {}};
  }
  if (c.mu == "constant")
    return {constant_disk_coefficient(spec, c.k).with_principal_map(maps::constant_disk(c.k)), 0, {}};
  if (c.mu == "radial")
    return {radial_stretch_coefficient(spec, K).with_principal_map(maps::radial_stretch(K)), 0, {Complex{}}};
  if (c.mu == "extremal") {
    const geometry::ExtremalParams params(K, default_R(c));
    auto est = estimate_beltrami(maps::extremal(params), spec);
    const auto ends = geometry::slit_endpoints(params);
    return {std::move(est.field), est.flagged.size(), {ends.z, ends.w}};
  }
  GridField samples = read_field(*c.mu_file);
  require(samples.spec() == spec, "mu file grid does not match --n/--L");
  return {BeltramiField(std::move(samples)), 0, {}};
}

DiscreteMap build_map(const RunConfig& c, double K) {
  if (c.map == "identity") return maps::identity();
  if (c.map == "extremal") return maps::extremal(geometry::ExtremalParams(K, default_R(c)));
  if (c.map == "radial") return maps::radial_stretch(K);
  const GridSpec spec(c.n, c.L);
  const double kinf = c.kinf.value_or((K - 1.0) / (K + 1.0));
  return principal_solution(random_beltrami(c.seed, kinf, c.modes, spec), solver_options(c)).map;
}

struct Emitted {
  std::string text;
  bool failed_check = false;
};

Emitted run_constants(const RunConfig& c) {
  const auto Ks = c.K.empty() ? geometry::default_K_grid() : c.K;
  std::vector<verify::ConstantsTable> tables;
  for (double K : Ks) tables.push_back(verify::constants(K));
  if (c.format == Format::csv) return {report::constants_csv(tables)};
  if (tables.size() == 1) return {report::constants_json(tables.front())};
  std::string out = "[\n";
  for (std::size_t i = 0; i < tables.size(); ++i) {
    auto line = report::constants_json(tables[i]);
    line.pop_back();
    out += "  " + line + (i + 1 < tables.size() ? ",\n" : "\n");
  }
  return {out + "]\n"};
}

Emitted run_sweep(const RunConfig& c) {
  const auto Ks = c.K.empty() ? geometry::default_K_grid() : c.K;
  const auto Rs = c.R.empty() ? geometry::default_R_grid() : c.R;
  std::vector<report::HolderRow> rows;
  bool violated = false;
  verify::SearchBudget budget;
  budget.radii = c.radii;
  budget.angles = c.angles;
  for (double K : Ks) {
    for (double R : Rs) {
      const geometry::ExtremalParams params(K, R);
      report::HolderRow row;
      if (c.search) {
        auto rep = verify::check_bound(maps::extremal(params), K, budget, c.tolerance);
        rep.R = R;
        row = report::to_row(rep);
      } else {
        const double tol = c.tolerance.value_or(verify::kClosedFormTolerance);
        row.K = K;
        row.R = R;
        row.estimate = geometry::extremal_quotient(params);
        row.bound = geometry::sharp_constant(K);
        row.ratio = row.estimate / row.bound;
        row.witness = geometry::slit_endpoints(params);
        row.violated = row.estimate > row.bound * (1.0 + tol);
      }
      violated = violated || row.violated;
      rows.push_back(row);
    }
  }
  return {c.format == Format::csv ? report::holder_csv(rows) : report::holder_rows_json(rows), violated};
}

Emitted run_verify(const RunConfig& c) {
  const double K = first_or(c.K, 1.0);
  verify::SearchBudget budget;
  budget.radii = c.radii;
  budget.angles = c.angles;
  auto rep = verify::check_bound(build_map(c, K), K, budget, c.tolerance);
  if (c.map == "extremal") rep.R = default_R(c);
  if (c.format == Format::json) return {report::holder_json(rep), rep.violation};
  const report::HolderRow row = report::to_row(rep);
  return {report::holder_csv(std::span(&row, 1)), rep.violation};
}

Emitted run_extremal(const RunConfig& c) {
  const geometry::ExtremalParams params(default_K(c), default_R(c));
  const double q = geometry::extremal_quotient(params);
  const double bound = geometry::analytic_dilatation_bound(params);
  const double sharp = geometry::sharp_constant(params.K());
  std::vector<std::pair<Complex, Complex>> table;
  for (int a = 0; a < c.samples; ++a) {
    for (int b = 0; b < c.samples; ++b) {
      const Complex z{-1.0 + 2.0 * a / (c.samples - 1), -1.0 + 2.0 * b / (c.samples - 1)};
      if (std::abs(z) <= 1.0) table.emplace_back(z, geometry::extremal_disk_map(z, params));
    }
  }
  if (c.format == Format::csv) {
    std::string out = "K,R,quotient,sharp,dilatation_bound,z_re,z_im,f_re,f_im\n";
    const std::string head = format_number(params.K()) + ',' + format_number(params.R()) + ',' + format_number(q) +
                             ',' + format_number(sharp) + ',' + format_number(bound) + ',';
    for (const auto& [z, f] : table)
      out += head + join({format_number(z.real()), format_number(z.imag()), format_number(f.real()),
                          format_number(f.imag())});
    return {out};
  }
  Json j;
  j["K"] = number(params.K());
  j["R"] = number(params.R());
  j["R_prime"] = number(params.r_prime());
  j["quotient"] = number(q);
  j["sharp"] = number(sharp);
  j["dilatation_bound"] = number(bound);
  const auto ends = geometry::slit_endpoints(params);
  j["segment"] = {{"z", point(ends.z)}, {"w", point(ends.w)}};
  Json rows = Json::array();
  for (const auto& [z, f] : table) rows.push_back({{"z", point(z)}, {"f", point(f)}});
  j["table"] = std::move(rows);
  return {dump(j)};
}

// max |f(z) - z| |z| over circles of radius 3 .. L - 1.
double decay_constant(const DiscreteMap& f, double L) {
  double best = 0.0;
  for (double r = 3.0; r <= L - 1.0 + 1e-12; r += 0.25)
    for (const auto& z : verify::circle_samples(r, 64)) best = std::max(best, std::abs(f(z) - z) * std::abs(z));
  return best;
}

// Max deviation from a closed form over grid nodes with |z| <= 0.9 or
// 1.1 <= |z| <= L - 1.
double reference_error(const DiscreteMap& f, const DiscreteMap& exact, const GridSpec& spec) {
  double err = 0.0;
  for (std::size_t j = 0; j < spec.n(); ++j) {
    for (std::size_t k = 0; k < spec.n(); ++k) {
      const Complex z = spec.point(j, k);
      const double r = std::abs(z);
      if ((r > 0.9 && r < 1.1) || r > spec.half_width() - 1.0) continue;
      err = std::max(err, std::abs(f.node_value(j, k) - exact(z)));
    }
  }
  return err;
}

Emitted run_solve(const RunConfig& c) {
  const GridSpec spec(c.n, c.L);
  auto coef = build_coefficient(c, spec);
  const auto sol = principal_solution(coef.field, solver_options(c));
  if (c.dump) write_field(*sol.map.correction(), *c.dump, FieldFormat::binary);

  ResidualRegion region;
  region.singular_points = coef.singular_points;
  const auto res = equation_residual(sol.map, coef.field.samples(), region);
  const double tol = c.tolerance.value_or(kResidualTolerance);
  const bool ok = res.max <= tol;
  const double decay = decay_constant(sol.map, c.L);
  std::optional<double> ref;
  if (const auto& exact = coef.field.principal_map()) ref = reference_error(sol.map, *exact, spec);

  if (c.format == Format::csv) {
    std::string out =
        "mu,n,L,k_inf,iterations,final_increment,residual_max,residual_at_re,residual_at_im,residual_samples,"
        "tolerance,within_tolerance,decay_constant,reference_error,flagged\n";
    out += join({c.mu, std::to_string(spec.n()), format_number(c.L), format_number(coef.field.sup_norm()),
                 std::to_string(sol.iterations), format_number(sol.final_increment), format_number(res.max),
                 format_number(res.at.real()), format_number(res.at.imag()), std::to_string(res.samples),
                 format_number(tol), ok ? "true" : "false", format_number(decay), ref ? format_number(*ref) : "",
                 std::to_string(coef.flagged)});
    return {out, !ok};
  }
  Json j;
  j["mu"] = c.mu;
  j["n"] = spec.n();
  j["L"] = number(c.L);
  if (c.mu == "random") {
    j["seed"] = c.seed;
    j["modes"] = c.modes;
  }
  j["k_inf"] = number(coef.field.sup_norm());
  j["iterations"] = sol.iterations;
  j["final_increment"] = number(sol.final_increment);
  Json incs = Json::array();
  for (double v : sol.increments) incs.push_back(number(v));
  j["increments"] = std::move(incs);
  j["residual"] = {{"max", number(res.max)}, {"at", point(res.at)}, {"samples", res.samples}};
  j["tolerance"] = number(tol);
  j["within_tolerance"] = ok;
  j["decay_constant"] = number(decay);
  j["reference_error"] = ref ? number(*ref) : Json(nullptr);
  j["flagged_samples"] = coef.flagged;
  return {dump(j), !ok};
}

Emitted run_flow(const RunConfig& c) {
  const double K = default_K(c);
  const GridSpec spec(c.n, c.L);
  auto coef = build_coefficient(c, spec);
  const double radius = (K - 1.0) / (K + 1.0);
  std::vector<Complex> lambdas = verify::circle_samples(radius, c.lambdas);
  const auto koebe = verify::koebe_check(coef.field, K, lambdas, solver_options(c));

  PointPair pair{{0.5, 0.0}, {-0.5, 0.0}};
  if (c.mu == "extremal") pair = geometry::slit_endpoints(geometry::ExtremalParams(K, default_R(c)));
  verify::HarnackOptions hopt;
  hopt.solver = solver_options(c);
  const auto h = verify::harnack_probe(coef.field, pair.z, pair.w, K, hopt);
  const double tol = c.tolerance.value_or(kResidualTolerance);
  const bool koebe_ok = koebe.max < 2.0;
  const bool harnack_ok = h.slack() <= tol && h.u0 < 0.0 && h.uk < 0.0;

  if (c.format == Format::csv) {
    std::string out =
        "mu,K,lambda_radius,lambdas,koebe_max,koebe_ok,u0,uk,uk_solver,slack,solver_slack,mean_value_defect,"
        "harnack_ok\n";
    out += join({c.mu, format_number(K), format_number(radius), std::to_string(lambdas.size()),
                 format_number(koebe.max), koebe_ok ? "true" : "false", format_number(h.u0), format_number(h.uk),
                 format_number(h.uk_solver), format_number(h.slack()), format_number(h.solver_slack()),
                 format_number(h.mean_value_defect), harnack_ok ? "true" : "false"});
    return {out, !(koebe_ok && harnack_ok)};
  }
  Json j;
  j["mu"] = c.mu;
  j["K"] = number(K);
  Json per = Json::array();
  for (double v : koebe.per_lambda) per.push_back(number(v));
  j["koebe"] = {{"lambda_radius", number(radius)}, {"max", number(koebe.max)},       {"at_z", point(koebe.at_z)},
                {"at_lambda", point(koebe.at_lambda)}, {"per_lambda", std::move(per)}, {"ok", koebe_ok}};
  j["harnack"] = {{"z", point(pair.z)},
                  {"w", point(pair.w)},
                  {"u0", number(h.u0)},
                  {"uk", number(h.uk)},
                  {"uk_solver", number(h.uk_solver)},
                  {"uk_from_principal_map", h.uk_from_principal_map},
                  {"slack", number(h.slack())},
                  {"solver_slack", number(h.solver_slack())},
                  {"mean_value_defect", number(h.mean_value_defect)},
                  {"tolerance", number(tol)},
                  {"ok", harnack_ok}};
  j["flagged_samples"] = coef.flagged;
  return {dump(j), !(koebe_ok && harnack_ok)};
}

const char* extension(Format f) { return f == Format::csv ? "csv" : "json"; }

}  // namespace

const char* command_name(Command c) {
  switch (c) {
    case Command::extremal: return "extremal";
    case Command::solve: return "solve";
    case Command::flow: return "flow";
    case Command::verify: return "verify";
    case Command::sweep: return "sweep";
    case Command::constants: return "constants";
  }
  return "unknown";
}

void validate(const RunConfig& c) {
  for (double K : c.K) require(std::isfinite(K) && K >= 1.0, "K must be a finite number >= 1");
  for (double R : c.R) require(std::isfinite(R) && R > 1.0, "R must be a finite number > 1");
  (void)GridSpec(c.n, c.L);
  if (c.tolerance) require(std::isfinite(*c.tolerance) && *c.tolerance >= 0.0, "tolerance must be >= 0");
  if (c.solver_tolerance)
    require(std::isfinite(*c.solver_tolerance) && *c.solver_tolerance > 0.0, "solver tolerance must be > 0");
  require(c.max_iterations >= 1, "max-iterations must be >= 1");
  require(one_of(c.map, {"identity", "extremal", "radial", "solver"}),
          "map must be one of identity, extremal, radial, solver");
  require(one_of(c.mu, {"random", "constant", "radial", "extremal", "file"}),
          "mu must be one of random, constant, radial, extremal, file");
  if (c.kinf) require(*c.kinf >= 0.0 && *c.kinf < 1.0, "kinf must lie in [0, 1)");
  require(std::isfinite(c.k) && std::abs(c.k) < 1.0, "k must satisfy |k| < 1");
  require(c.modes >= 1, "modes must be >= 1");
  require(c.radii >= 2 && c.angles >= 1, "radii must be >= 2 and angles >= 1");
  require(c.lambdas >= 1, "lambdas must be >= 1");
  require(c.samples >= 2, "samples must be >= 2");

  const bool single = c.command != Command::sweep && c.command != Command::constants;
  if (single) {
    require(c.K.size() <= 1, std::string(command_name(c.command)) + " takes a single K");
    require(c.R.size() <= 1, std::string(command_name(c.command)) + " takes a single R");
  }
  const bool uses_mu = c.command == Command::solve || c.command == Command::flow;
  if (uses_mu && c.mu == "file") require(c.mu_file.has_value(), "mu=file needs --mu-file");
  if (uses_mu && (c.mu == "radial" || c.mu == "extremal" || c.command == Command::flow))
    require(default_K(c) > 1.0 || (c.mu == "extremal" && c.command == Command::solve),
            "K must be > 1 for this coefficient");
  if (c.command == Command::flow) require(c.mu != "constant" || std::abs(c.k) > 0.0, "k must be nonzero");
}

std::optional<std::filesystem::path> resolve_output(const RunConfig& c) {
  if (c.output) return c.output;
  if (const char* dir = std::getenv(kOutDirEnv); dir != nullptr && *dir != '\0')
    return std::filesystem::path(dir) / (std::string(command_name(c.command)) + '.' + extension(c.format));
  return std::nullopt;
}

RunResult run(const RunConfig& c) {
  RunResult result;
  try {
    validate(c);
  } catch (const std::exception& e) {
    result.exit_code = kExitConfig;
    result.diagnostic = std::string("config error: ") + e.what();
    return result;
  }
  try {
    Emitted out;
    switch (c.command) {
      case Command::extremal: out = run_extremal(c); break;
      case Command::solve: out = run_solve(c); break;
      case Command::flow: out = run_flow(c); break;
      case Command::verify: out = run_verify(c); break;
      case Command::sweep: out = run_sweep(c); break;
      case Command::constants: out = run_constants(c); break;
    }
    if (const auto path = resolve_output(c)) {
      report::write_text(*path, out.text);
      result.written_to = path;
    }
    result.artifact = std::move(out.text);
    if (out.failed_check) {
      result.exit_code = kExitViolation;
      result.diagnostic = std::string(command_name(c.command)) + ": verification check failed (see artifact)";
    }
  } catch (const SolverError& e) {
    result.exit_code = kExitSolver;
    result.diagnostic = std::string("solver error: ") + e.what() + " (iterations " +
                        std::to_string(e.iterations()) + ", last increment " + format_number(e.last_increment()) +
                        ")";
  } catch (const IoError& e) {
    result.exit_code = kExitIo;
    result.diagnostic = std::string("i/o error: ") + e.what();
  } catch (const std::filesystem::filesystem_error& e) {
    result.exit_code = kExitIo;
    result.diagnostic = std::string("i/o error: ") + e.what();
  } catch (const std::exception& e) {
    result.exit_code = kExitConfig;
    result.diagnostic = std::string("config error: ") + e.what();
  }
  return result;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Sharp Hölder constants of quasiconformal disk maps: construct, solve, verify."};
  app.set_config("--config", "", "Flat key=value file mirroring the flags; flags take precedence");
  app.require_subcommand(1, 1);

  std::string format = "csv";
  std::string output, mu_file, dump_path;
  std::optional<double> tolerance, solver_tolerance, kinf;
  app.add_option("--K", c.K, "Maximal dilatation (comma list for sweep/constants)")->delimiter(',');
  app.add_option("--R", c.R, "Ellipse parameter (comma list for sweep)")->delimiter(',');
  app.add_option("--n", c.n, "Grid points per axis (power of two >= 64)");
  app.add_option("--L", c.L, "Grid half width");
  app.add_option("--seed", c.seed, "Seed for random coefficients");
  app.add_option("--output", output, "Artifact path (default $" + std::string(kOutDirEnv) + "/<command>.<fmt>)");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--tolerance", tolerance, "Override the check tolerance");
  app.add_option("--solver-tolerance", solver_tolerance, "Neumann stopping threshold");
  app.add_option("--max-iterations", c.max_iterations, "Neumann iteration cap");
  app.add_option("--map", c.map, "verify: identity, extremal, radial or solver");
  app.add_option("--mu", c.mu, "solve/flow coefficient: random, constant, radial, extremal or file");
  app.add_option("--mu-file", mu_file, "Grid field file for --mu file");
  app.add_option("--k", c.k, "Value of the constant coefficient");
  app.add_option("--kinf", kinf, "Sup norm of random coefficients (default (K-1)/(K+1))");
  app.add_option("--modes", c.modes, "Fourier modes of random coefficients");
  app.add_option("--radii", c.radii, "Radii of the coarse search grid");
  app.add_option("--angles", c.angles, "Angles of the coarse search grid");
  app.add_option("--lambdas", c.lambdas, "flow: lambda samples on |lambda| = (K-1)/(K+1)");
  app.add_flag("--search", c.search, "sweep: run the pair search instead of the closed form");
  app.add_option("--samples", c.samples, "extremal: tabulation points per axis");
  app.add_option("--dump", dump_path, "solve: write the samples of f - z to this file");

  const std::pair<const char*, Command> commands[] = {
      {"extremal", Command::extremal}, {"solve", Command::solve}, {"flow", Command::flow},
      {"verify", Command::verify},     {"sweep", Command::sweep}, {"constants", Command::constants}};
  const char* help[] = {"Tabulate the extremal map; report its quotient and dilatation bound",
                        "Principal solution for a coefficient, with residual report",
                        "Koebe bound and Harnack probe along the holomorphic flow",
                        "Hölder constant search against 4^(1-1/K)",
                        "Quotient/bound ratios over a (K, R) grid",
                        "Comparison constants"};
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < std::size(commands); ++i) {
    auto* sub = app.add_subcommand(commands[i].first, help[i]);
    sub->fallthrough();
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    for (auto& ch : msg)
      if (ch == '\n') ch = ' ';
    err << "config error: " << msg << '\n';
    return kExitConfig;
  }

  for (std::size_t i = 0; i < subs.size(); ++i)
    if (subs[i]->parsed()) c.command = commands[i].second;
  c.format = format == "json" ? Format::json : Format::csv;
  if (!output.empty()) c.output = output;
  if (!mu_file.empty()) c.mu_file = mu_file;
  if (!dump_path.empty()) c.dump = dump_path;
  c.tolerance = tolerance;
  c.solver_tolerance = solver_tolerance;
  c.kinf = kinf;

  const auto result = run(c);
  if (!result.written_to && !result.artifact.empty()) out << result.artifact;
  if (!result.diagnostic.empty()) err << result.diagnostic << '\n';
  return result.exit_code;
}

}  // namespace qcholder::cli
