#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "rhsolve/cli.hpp"
#include "rhsolve/errors.hpp"

namespace rhsolve::cli {

namespace fs = std::filesystem;

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  if (!out) throw Error("cannot write '" + p.string() + "'");
  out << text;
}

void write_json(const fs::path& p, const json& j) { write_text(p, j.dump(2) + "\n"); }

fs::path prepare_out(const RunConfig& cfg) {
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  return dir;
}

void write_metadata(const fs::path& dir, const std::string& command) {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  write_json(dir / "metadata.json", {{"command", command}, {"timestamp", stamp}, {"tool", "rhsolve"}});
}

void write_history(const fs::path& dir, const std::vector<double>& history) {
  std::string s = "iteration,residual\n";
  for (std::size_t i = 0; i < history.size(); ++i) s += std::to_string(i) + "," + num(history[i]) + "\n";
  write_text(dir / "history.csv", s);
}

void write_trace(const fs::path& p, const BoundaryTrace& t) {
  std::ofstream out(p);
  if (!out) throw Error("cannot write '" + p.string() + "'");
  write_trace_csv(out, t);
}

void require_families(const RunConfig& cfg) {
  const std::size_t need = cfg.annulus ? 2 : 1;
  if (cfg.families.size() != need) throw ConfigError("config needs 'families'");
}

void require_windings(const RunConfig& cfg) {
  if (cfg.windings.empty()) throw ConfigError("config needs 'windings'");
}

// Radius polynomial of a circle family centred at the origin.
TrigPolynomial radial_polynomial(const json& spec) {
  if (spec.at("type") != "circle") throw ConfigError("radial method needs circle families");
  const json& f = spec.at("fourier");
  for (const char* key : {"c", "c_im"})
    if (f.contains(key))
      for (const json& v : f.at(key))
        if (v.get<double>() != 0.0) throw ConfigError("radial method needs circles centred at 0");
  return TrigPolynomial(f.at("R").get<std::vector<double>>());
}

AnnulusOptions annulus_options(const RunConfig& cfg) {
  AnnulusOptions o;
  o.glue.disc.grid = cfg.grid;
  o.glue.disc.max_grid = cfg.max_grid;
  o.glue.disc.tol = std::min(cfg.tol, 1e-10);
  o.tol = cfg.tol;
  o.max_iter = cfg.max_iter;
  o.max_halvings = cfg.damping ? 6 : 0;
  o.certify = cfg.certify;
  o.certify_options.seed = cfg.seed;
  o.zeros.seed = cfg.seed;
  return o;
}

AnnulusSolution annulus_solution(const RunConfig& cfg) {
  require_families(cfg);
  if (cfg.method == "radial")
    return solve_annulus_radial(radial_polynomial(cfg.family_specs[0]),
                                radial_polynomial(cfg.family_specs[1]), cfg.q, cfg.psi, cfg.grid);
  require_windings(cfg);
  return solve_annulus(cfg.families[0], cfg.families[1], cfg.windings[0], cfg.windings[1], cfg.q,
                       annulus_options(cfg));
}

json config_echo(const RunConfig& cfg) {
  json j = {{"method", cfg.annulus ? cfg.method : "disc"}, {"families", cfg.family_specs},
            {"windings", cfg.windings}, {"seed", cfg.seed}};
  return j;
}

}  // namespace

int run_solve(const RunConfig& cfg) {
  require_families(cfg);
  if (!cfg.annulus) {
    require_windings(cfg);
    DiscOptions o;
    o.grid = cfg.grid;
    o.max_grid = cfg.max_grid;
    o.tol = cfg.tol;
    o.max_iter = cfg.max_iter;
    o.max_halvings = cfg.damping ? 6 : 0;
    o.certify = cfg.certify;
    o.certify_options.seed = cfg.seed;
    const DiscSolution s = [&] {
      try {
        return solve_disc(cfg.families[0], cfg.windings[0], o);
      } catch (const NoConvergence& e) {
        const fs::path dir = prepare_out(cfg);
        if (cfg.wants("csv")) write_history(dir, e.history());
        throw;
      }
    }();
    ZeroSearchOptions zo;
    zo.seed = cfg.seed;
    const BoundaryTrace traces[] = {s.f_trace};
    const std::vector<LocatedZero> zeros = locate_zeros(traces, Domain::disc(), zo);
    const fs::path dir = prepare_out(cfg);
    if (cfg.wants("json")) {
      json r = to_json(s, zeros);
      r["config"] = config_echo(cfg);
      write_json(dir / "result.json", r);
      write_metadata(dir, "solve");
    }
    if (cfg.wants("csv")) {
      write_trace(dir / "trace_gamma0.csv", s.f_trace);
      write_history(dir, s.newton_history);
    }
    return kOk;
  }

  AnnulusSolution s;
  try {
    s = annulus_solution(cfg);
  } catch (const NoConvergence& e) {
    const fs::path dir = prepare_out(cfg);
    if (cfg.wants("csv")) write_history(dir, e.history());
    throw;
  }
  const fs::path dir = prepare_out(cfg);
  if (cfg.wants("json")) {
    json r = to_json(s);
    r["config"] = config_echo(cfg);
    write_json(dir / "result.json", r);
    write_metadata(dir, "solve");
  }
  if (cfg.wants("csv")) {
    write_trace(dir / "trace_gamma0.csv", s.gamma0);
    write_trace(dir / "trace_gamma1.csv", s.gamma1);
    write_history(dir, s.newton_history);
  }
  return kOk;
}

int run_check_identity(const RunConfig& cfg) {
  if (!cfg.annulus) throw ConfigError("check-identity needs an annulus domain");
  const AnnulusSolution s = annulus_solution(cfg);
  IdentityReport rep;
  try {
    rep = check_identity(s, cfg.families[0], cfg.families[1]);
  } catch (const NotRadialFamily& e) {
    throw ConfigError(e.what());
  }
  if (cfg.assumed_k1) {
    rep.rhs += *cfg.assumed_k1 - rep.k1;
    rep.k1 = *cfg.assumed_k1;
    rep.k1_coherent = -rep.k1;
    rep.diff = std::abs(rep.lhs - rep.rhs);
  }
  const fs::path dir = prepare_out(cfg);
  write_json(dir / "identity.json", to_json(rep));
  write_metadata(dir, "check-identity");
  if (rep.diff > cfg.identity_bound) {
    std::cerr << "identity mismatch: |lhs - rhs| = " << num(rep.diff) << "\n";
    return kIdentityMismatch;
  }
  return kOk;
}

int run_sweep(const RunConfig& cfg) {
  if (!cfg.annulus) throw ConfigError("sweep needs an annulus domain");
  require_families(cfg);
  if (!cfg.n_range) throw ConfigError("sweep needs an n range");
  const auto [lo, hi] = *cfg.n_range;
  if (hi < lo || lo < 0) throw ConfigError("n range is empty");
  const AnnulusOptions o = annulus_options(cfg);

  std::vector<double> ns, logs;
  std::string csv = "n,pre_newton_residual,collar_norm,fitted_slope\n";
  json rows = json::array();
  for (int n = lo; n <= hi; ++n) {
    const GlueResult g = glue_construct(cfg.families[0], cfg.families[1], n, cfg.q, o.glue);
    csv += std::to_string(n) + "," + num(g.report.pre_newton_residual) + "," +
           num(g.report.collar_norm) + ",\n";
    rows.push_back(to_json(g.report));
    ns.push_back(n);
    logs.push_back(std::log(g.report.pre_newton_residual));
  }
  json out = {{"q", cfg.q}, {"rows", rows}};
  if (ns.size() >= 2) {
    const LinearFit f = fit_line(ns, logs);
    csv += "fit,,," + num(f.slope) + "\n";
    out["fit"] = {{"slope", f.slope}, {"intercept", f.intercept}, {"r_squared", f.r_squared},
                  {"collar_bound", std::log(std::cbrt(cfg.q))}};
  } else {
    out["fit"] = nullptr;
  }
  const fs::path dir = prepare_out(cfg);
  if (cfg.wants("csv")) write_text(dir / "sweep.csv", csv);
  if (cfg.wants("json")) {
    write_json(dir / "sweep.json", out);
    write_metadata(dir, "sweep");
  }
  return kOk;
}

int run_demo_surjectivity(const RunConfig& cfg) {
  if (!cfg.annulus) throw ConfigError("demo-surjectivity needs an annulus domain");
  std::vector<double> targets = cfg.targets;
  if (targets.empty())
    for (int i = 0; i < 10; ++i) targets.push_back(0.1 * i);
  const std::vector<SurjectivityRow> rows = surjectivity_demo(targets, cfg.q, cfg.psi, cfg.grid);
  std::string csv = "target,realized,error,zero_count,zero_re,zero_im\n";
  json j = json::array();
  bool ok = true;
  for (const SurjectivityRow& r : rows) {
    const cplx z = r.zero.value_or(cplx(NAN, NAN));
    csv += num(r.target) + "," + num(r.realized) + "," + num(r.error) + "," +
           std::to_string(r.zero_count) + "," + (r.zero ? num(z.real()) : "") + "," +
           (r.zero ? num(z.imag()) : "") + "\n";
    json row = {{"target", r.target}, {"realized", r.realized}, {"error", r.error},
                {"zero_count", r.zero_count}};
    row["zero"] = r.zero ? json{{"re", z.real()}, {"im", z.imag()}} : json(nullptr);
    j.push_back(row);
    ok = ok && r.error <= cfg.identity_bound && r.zero_count <= 1;
  }
  const fs::path dir = prepare_out(cfg);
  if (cfg.wants("csv")) write_text(dir / "surjectivity.csv", csv);
  if (cfg.wants("json")) {
    write_json(dir / "surjectivity.json", {{"q", cfg.q}, {"rows", j}});
    write_metadata(dir, "demo-surjectivity");
  }
  return ok ? kOk : kIdentityMismatch;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Nonlinear Riemann-Hilbert solver for the disc and the annulus"};
  app.require_subcommand(1);

  std::string config, out, n_range;
  std::uint64_t seed = 0;
  int grid = 0;
  double tol = 0.0, q = 0.5;
  struct Sub {
    CLI::App* app;
    CLI::Option *config, *out, *seed, *grid, *tol, *n_range, *q;
  };
  auto add = [&](const std::string& name, const std::string& help, bool needs_config) {
    Sub s{app.add_subcommand(name, help), nullptr, nullptr, nullptr, nullptr, nullptr, nullptr, nullptr};
    s.config = s.app->add_option("--config", config, "JSON run configuration");
    if (needs_config) s.config->required();
    s.out = s.app->add_option("--out", out, "output directory");
    s.seed = s.app->add_option("--seed", seed, "sampling seed");
    s.grid = s.app->add_option("--grid", grid, "boundary grid size");
    s.tol = s.app->add_option("--tol", tol, "Newton tolerance");
    return s;
  };
  Sub solve = add("solve", "solve one problem", true);
  Sub ident = add("check-identity", "solve a radial annulus problem and check the zero identity", true);
  Sub sweep = add("sweep", "glue residual against the collar winding", true);
  sweep.n_range = sweep.app->add_option("--n-range", n_range, "windings as first:last");
  Sub demo = add("demo-surjectivity", "realise harmonic-measure targets in closed form", false);
  demo.q = demo.app->add_option("--q", q, "annulus modulus when no config is given");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfigError;
  }

  try {
    for (const Sub* s : {&solve, &ident, &sweep, &demo}) {
      if (!s->app->parsed()) continue;
      RunConfig cfg;
      if (s->config->count()) {
        cfg = load_config(config);
      } else {
        cfg.annulus = true;
        cfg.q = q;
        if (!(q > 0.0 && q < 1.0)) throw ConfigError("--q must lie in (0, 1)");
      }
      if (s->out->count()) cfg.out_dir = out;
      if (s->seed->count()) cfg.seed = seed;
      if (s->grid->count()) {
        if (grid < 16 || (grid & (grid - 1)) != 0)
          throw ConfigError("--grid must be a power of two >= 16");
        cfg.grid = grid;
      }
      if (s->tol->count()) {
        if (!(tol > 0.0)) throw ConfigError("--tol must be positive");
        cfg.tol = tol;
      }
      if (s->n_range && s->n_range->count()) cfg.n_range = parse_n_range(n_range);
      if (s == &solve) return run_solve(cfg);
      if (s == &ident) return run_check_identity(cfg);
      if (s == &sweep) return run_sweep(cfg);
      return run_demo_surjectivity(cfg);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const NoConvergence& e) {
    std::cerr << "no convergence: " << e.what() << "\n";
    return kNoConvergence;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSolverFailure;
  }
  return kConfigError;
}

}  // namespace rhsolve::cli
