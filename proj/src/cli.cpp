#include "wlab/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "wlab/analysis.hpp"
#include "wlab/geometry.hpp"
#include "wlab/identities.hpp"
#include "wlab/zoo.hpp"

namespace wlab {

namespace {

struct RunConfig {
  std::string surface;  // inline JSON or @file
  std::string config_path;
  double r_in = 0.02, r_out = 0.8;
  int n_r = 48, n_phi = 128;
  double kappa = 1e-2;
  double tol = 1e-3;
  std::string out_path;
  std::uint64_t seed = 42;
  std::vector<double> rhos = {0.1, 0.2, 0.4};
  int residue_samples = 256;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

nlohmann::json parse_surface_json(const std::string& arg) {
  std::string text = arg;
  if (!arg.empty() && arg[0] == '@') {
    std::ifstream in(arg.substr(1));
    if (!in) throw ConfigError("cannot open surface file '" + arg.substr(1) + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ConfigError("surface argument is not valid JSON: " + text);
  return j;
}

void validate(const RunConfig& c, const ImmersionField& f) {
  if (!(f.r_min <= c.r_in && c.r_in < c.r_out && c.r_out <= f.r_max))
    throw ConfigError("annulus [" + std::to_string(c.r_in) + ", " + std::to_string(c.r_out) +
                      "] violates r_min <= r_in < r_out <= r_max for " + f.name);
  if (c.n_r < 4 || c.n_phi < 4) throw ConfigError("quadrature counts must be at least 4");
  if (!(c.kappa > 0.0) || c.kappa > 0.1) throw ConfigError("kappa must lie in (0, 0.1]");
}

void apply_config_file(RunConfig& c, CLI::App* sub) {
  if (c.config_path.empty()) return;
  std::ifstream in(c.config_path);
  if (!in) throw ConfigError("cannot open config file '" + c.config_path + "'");
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded()) throw ConfigError("config file is not valid JSON");
  // Flags given on the command line override the file.
  auto absent = [&](const std::string& flag) { return sub->count(flag) == 0; };
  if (j.contains("surface") && absent("--surface"))
    c.surface = j["surface"].is_string() ? j["surface"].get<std::string>() : j["surface"].dump();
  if (j.contains("annulus") && absent("--annulus")) {
    c.r_in = j["annulus"].at(0).get<double>();
    c.r_out = j["annulus"].at(1).get<double>();
  }
  if (j.contains("nr") && absent("--nr")) c.n_r = j["nr"].get<int>();
  if (j.contains("nphi") && absent("--nphi")) c.n_phi = j["nphi"].get<int>();
  if (j.contains("kappa") && absent("--kappa")) c.kappa = j["kappa"].get<double>();
  if (j.contains("tol") && absent("--tol")) c.tol = j["tol"].get<double>();
  if (j.contains("out") && absent("--out")) c.out_path = j["out"].get<std::string>();
  if (j.contains("seed") && absent("--seed")) c.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("rhos") && absent("--rhos")) c.rhos = j["rhos"].get<std::vector<double>>();
}

void ensure_finite(const nlohmann::ordered_json& j) {
  if (j.is_number_float()) {
    if (!std::isfinite(j.get<double>()))
      throw std::domain_error("non-finite number in report output");
    return;
  }
  if (j.is_structured())
    for (const auto& el : j) ensure_finite(el);
}

void emit(const RunConfig& c, const std::string& text, std::ostream& out) {
  if (c.out_path.empty()) {
    out << text << '\n';
    return;
  }
  std::ofstream f(c.out_path, std::ios::binary);
  if (!f) throw ConfigError("cannot write output file '" + c.out_path + "'");
  f << text << '\n';
}

void emit_json(const RunConfig& c, const nlohmann::ordered_json& j, std::ostream& out) {
  ensure_finite(j);
  emit(c, j.dump(2), out);
}

AnalyzeOptions analyze_options(const RunConfig& c) {
  AnalyzeOptions opts;
  opts.geom.kappa = c.kappa;
  opts.tol = c.tol;
  opts.residue_rhos = c.rhos;
  opts.residue_samples = c.residue_samples;
  return opts;
}

nlohmann::ordered_json vec_json(const Vec& v) {
  nlohmann::ordered_json a = nlohmann::ordered_json::array();
  for (int i = 0; i < v.dim(); ++i) a.push_back(v[i]);
  return a;
}

int cmd_report(const RunConfig& c, const ImmersionField& f, std::ostream& out) {
  ExpansionReport rep = analyze(f, analyze_options(c));
  nlohmann::ordered_json j = rep.to_json();
  j["surface"] = f.name;
  emit_json(c, j, out);
  return 0;
}

int cmd_residue(const RunConfig& c, const ImmersionField& f, std::ostream& out) {
  GeomOptions g;
  g.kappa = c.kappa;
  SpreadResult spread = residue_spread(f, c.rhos, c.residue_samples, g);
  ResidueResult res = residue(f, c.rhos[c.rhos.size() / 2], c.residue_samples, g);
  nlohmann::ordered_json j;
  j["surface"] = f.name;
  j["c0"] = vec_json(spread.mean);
  j["error_estimate"] = res.error_estimate;
  j["reliable"] = res.reliable;
  j["spread"] = {{"rhos", c.rhos}, {"max_deviation", spread.max_deviation}};
  nlohmann::ordered_json per;
  for (const Vec& v : spread.per_rho) per.push_back(vec_json(v));
  j["spread"]["per_rho"] = per;
  emit_json(c, j, out);
  return 0;
}

int cmd_verify(const RunConfig& c, std::ostream& out) {
  GeomOptions g;
  g.kappa = c.kappa;
  std::vector<IdentityCheckResult> results = run_identity_sweep(10, c.seed, g);
  int failures = 0;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& r : results) {
    if (!r.pass) ++failures;
    rows.push_back({{"name", r.name},
                    {"field", r.field},
                    {"x", {r.x.x1, r.x.x2}},
                    {"residual", r.residual},
                    {"tolerance", r.tolerance},
                    {"pass", r.pass},
                    {"seed", r.seed}});
  }
  nlohmann::ordered_json j;
  j["checks"] = rows.size();
  j["failures"] = failures;
  j["results"] = rows;
  emit_json(c, j, out);
  return failures == 0 ? 0 : 1;
}

int cmd_energy(const RunConfig& c, const ImmersionField& f, std::ostream& out) {
  GeomOptions g;
  g.kappa = c.kappa;
  double w1 = willmore_energy(f, c.r_in, c.r_out, c.n_r, c.n_phi, g);
  double w2 = willmore_energy(f, c.r_in, c.r_out, 2 * c.n_r, 2 * c.n_phi, g);
  double e1 = gauss_energy(f, c.r_in, c.r_out, c.n_r, c.n_phi, g);
  double e2 = gauss_energy(f, c.r_in, c.r_out, 2 * c.n_r, 2 * c.n_phi, g);
  nlohmann::ordered_json j;
  j["surface"] = f.name;
  j["annulus"] = {c.r_in, c.r_out};
  j["willmore_energy"] = w2;
  j["gauss_energy"] = e2;
  j["convergence"] = {{"willmore_coarse", w1},
                      {"willmore_fine", w2},
                      {"willmore_delta", std::abs(w2 - w1)},
                      {"gauss_coarse", e1},
                      {"gauss_fine", e2},
                      {"gauss_delta", std::abs(e2 - e1)}};
  emit_json(c, j, out);
  return 0;
}

int cmd_dump(const RunConfig& c, const ImmersionField& f, std::ostream& out) {
  GeomOptions g;
  g.kappa = c.kappa;
  std::ostringstream ss;
  dump_geometry_csv(ss, f, c.r_in, c.r_out, c.n_r, c.n_phi, g);
  emit(c, ss.str(), out);
  return 0;
}

int cmd_delta(const RunConfig& c, const ImmersionField& f, std::ostream& out) {
  GeomOptions g;
  g.kappa = c.kappa;
  std::vector<double> radii;
  for (double r = c.r_out; r >= c.r_in * 0.999; r *= 0.5) radii.push_back(r);
  auto rows = delta_profile(f, radii, c.n_phi, g);
  std::ostringstream ss;
  ss << "r,delta\n";
  for (auto& [r, d] : rows) ss << r << ',' << d << '\n';
  emit(c, ss.str(), out);
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Conformal-immersion laboratory: curvature, conserved-current residues, and "
               "branch-point asymptotics on punctured-disk charts"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string command;
  for (const char* name : {"report", "residue", "verify", "energy", "dump", "delta"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--surface", cfg.surface, "surface spec as JSON or @file");
    sub->add_option("--config", cfg.config_path, "JSON config file; flags override it");
    sub->add_option("--annulus", [&cfg](const std::vector<std::string>& vals) {
      return std::sscanf(vals[0].c_str(), "%lf,%lf", &cfg.r_in, &cfg.r_out) == 2;
    }, "annulus as r_in,r_out");
    sub->add_option("--nr", cfg.n_r, "radial quadrature count");
    sub->add_option("--nphi", cfg.n_phi, "angular quadrature count");
    sub->add_option("--kappa", cfg.kappa, "relative finite-difference step");
    sub->add_option("--tol", cfg.tol, "classifier tolerance (relative)");
    sub->add_option("--out", cfg.out_path, "output path (default stdout)");
    sub->add_option("--seed", cfg.seed, "seed for randomized sweeps");
    sub->add_option("--rhos", cfg.rhos, "residue circle radii");
    sub->callback([&command, name] { command = name; });
  }

  try {
    std::vector<std::string> rargs(args.rbegin(), args.rend());
    app.parse(rargs);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      out << app.help();
      return 0;
    }
    err << "argument error: " << e.what() << '\n';
    return 2;
  }

  try {
    CLI::App* sub = app.get_subcommand(command);
    apply_config_file(cfg, sub);

    if (command == "verify") return cmd_verify(cfg, out);

    if (cfg.surface.empty()) throw ConfigError("missing --surface");
    SurfaceSpec spec = SurfaceSpec::from_json(parse_surface_json(cfg.surface));
    ImmersionField field = make_field(spec);
    validate(cfg, field);

    if (command == "report") return cmd_report(cfg, field, out);
    if (command == "residue") return cmd_residue(cfg, field, out);
    if (command == "energy") return cmd_energy(cfg, field, out);
    if (command == "dump") return cmd_dump(cfg, field, out);
    if (command == "delta") return cmd_delta(cfg, field, out);
    throw ConfigError("unknown command");
  } catch (const ConfigError& e) {
    nlohmann::ordered_json j;
    j["error"] = e.what();
    err << j.dump(2) << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    nlohmann::ordered_json j;
    j["error"] = e.what();
    err << j.dump(2) << '\n';
    return 2;
  } catch (const std::exception& e) {
    nlohmann::ordered_json j;
    j["error"] = e.what();
    j["kind"] = "numerical";
    err << j.dump(2) << '\n';
    return 3;
  }
}

}  // namespace wlab
