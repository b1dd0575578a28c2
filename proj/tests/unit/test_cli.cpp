#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "rhsolve/cli.hpp"
#include "rhsolve/errors.hpp"

using namespace rhsolve;
using namespace rhsolve::cli;
namespace fs = std::filesystem;

namespace {

// Fresh scratch directory per test case.
struct Scratch {
  fs::path dir;
  explicit Scratch(const std::string& name) {
    dir = fs::temp_directory_path() / ("rhsolve_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }

  fs::path write(const std::string& file, const json& j) const {
    const fs::path p = dir / file;
    std::ofstream(p) << j.dump(2);
    return p;
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run(std::vector<std::string> args) {
  args.insert(args.begin(), "rhsolve");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

fs::path shipped(const std::string& name) {
  const char* d = std::getenv("RHSOLVE_CONFIG_DIR");
  return fs::path(d ? d : "tools/configs") / name;
}

json disc_circle() {
  return {{"domain", {{"type", "disc"}}},
          {"families", json::array({{{"type", "circle"}, {"fourier", {{"R", {1.0}}}}}})},
          {"windings", 1}};
}

json radial_pair(double r1) {
  return {{"domain", {{"type", "annulus"}, {"q", 0.5}}},
          {"families", json::array({{{"type", "circle"}, {"fourier", {{"R", {1.0}}}}},
                                    {{"type", "circle"}, {"fourier", {{"R", {r1}}}}}})},
          {"method", "radial"}};
}

}  // namespace

TEST_CASE("config validation") {
  const RunConfig c = parse_config(disc_circle());
  CHECK_FALSE(c.annulus);
  CHECK(c.windings == std::vector<int>{1});
  CHECK(c.families.size() == 1);

  json bad = disc_circle();
  bad["colour"] = "red";
  CHECK_THROWS_AS(parse_config(bad), ConfigError);
  bad = disc_circle();
  bad["newton"] = {{"tol", 1e-10}, {"speed", 2}};
  CHECK_THROWS_AS(parse_config(bad), ConfigError);
  bad = disc_circle();
  bad["grid"] = 100;
  CHECK_THROWS_AS(parse_config(bad), ConfigError);
  bad = disc_circle();
  bad["windings"] = -1;
  CHECK_THROWS_AS(parse_config(bad), ConfigError);
  bad = disc_circle();
  bad["domain"] = {{"type", "disc"}, {"q", 0.5}};
  CHECK_THROWS_AS(parse_config(bad), ConfigError);
  bad = disc_circle();
  bad["families"][0]["type"] = "hexagon";
  CHECK_THROWS(parse_config(bad));

  const RunConfig a = parse_config(radial_pair(0.7));
  CHECK(a.annulus);
  CHECK(a.q == 0.5);
  CHECK(a.method == "radial");
}

TEST_CASE("shipped configs parse") {
  for (const char* name : {"disc_circle.json", "disc_ellipse.json", "annulus_radial.json",
                           "annulus_glue.json", "annulus_mixed.json"})
    CHECK_NOTHROW(load_config(shipped(name).string()));
}

TEST_CASE("n range and line fit") {
  CHECK(parse_n_range("4:12") == std::make_pair(4, 12));
  CHECK(parse_n_range("4..12") == std::make_pair(4, 12));
  CHECK(parse_n_range("7") == std::make_pair(7, 7));
  CHECK_THROWS_AS(parse_n_range("4-x"), ConfigError);
  CHECK_THROWS_AS(parse_n_range(""), ConfigError);

  const auto f = fit_line({1, 2, 3, 4}, {3, 5, 7, 9});
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.r_squared == doctest::Approx(1.0));
  const auto g = fit_line({0, 1, 2, 3}, {0, 1, 0, 1});
  CHECK(g.r_squared < 0.5);
}

TEST_CASE("solve writes artifacts") {
  Scratch s("solve");
  const auto cfg = s.write("c.json", disc_circle());
  const auto out = s.dir / "out";
  CHECK(run({"solve", "--config", cfg.string(), "--out", out.string()}) == kOk);
  for (const char* f : {"result.json", "trace_gamma0.csv", "history.csv", "metadata.json"})
    CHECK(fs::exists(out / f));
  const json r = json::parse(slurp(out / "result.json"));
  CHECK(r.at("residual_sup").get<double>() <= 1e-15);
  CHECK(r.at("winding").get<int>() == 1);
  CHECK(slurp(out / "history.csv").rfind("iteration,residual\n", 0) == 0);
}

TEST_CASE("radial annulus solve reports one zero") {
  Scratch s("radial");
  const auto cfg = s.write("c.json", radial_pair(std::sqrt(0.5)));
  const auto out = s.dir / "out";
  CHECK(run({"solve", "--config", cfg.string(), "--out", out.string()}) == kOk);
  const json r = json::parse(slurp(out / "result.json"));
  CHECK(r.at("zeros").size() == 1);
  CHECK(fs::exists(out / "trace_gamma1.csv"));
}

TEST_CASE("result.json is deterministic") {
  Scratch s("determinism");
  json c = disc_circle();
  c["families"][0]["fourier"]["R"] = {1.0, 0.2, 0.1};
  const auto cfg = s.write("c.json", c);
  CHECK(run({"solve", "--config", cfg.string(), "--out", (s.dir / "a").string(), "--seed", "11"}) == kOk);
  CHECK(run({"solve", "--config", cfg.string(), "--out", (s.dir / "b").string(), "--seed", "11"}) == kOk);
  const std::string a = slurp(s.dir / "a" / "result.json"), b = slurp(s.dir / "b" / "result.json");
  CHECK_FALSE(a.empty());
  CHECK(a == b);
}

TEST_CASE("malformed config leaves no artifacts") {
  Scratch s("malformed");
  json c = disc_circle();
  c["families"][0] = {{"type", "circle"}, {"fourier", {{"R", "wide"}}}};
  const auto cfg = s.write("c.json", c);
  const auto out = s.dir / "out";
  CHECK(run({"solve", "--config", cfg.string(), "--out", out.string()}) == kConfigError);
  CHECK_FALSE(fs::exists(out));
  std::ofstream(s.dir / "broken.json") << "{\"domain\": ";
  CHECK(run({"solve", "--config", (s.dir / "broken.json").string(), "--out", out.string()}) == kConfigError);
  CHECK_FALSE(fs::exists(out));
  CHECK(run({"solve", "--config", (s.dir / "missing.json").string()}) == kConfigError);
  CHECK(run({"solve", "--config", cfg.string(), "--grid", "100"}) == kConfigError);
}

TEST_CASE("no convergence maps to exit 2") {
  Scratch s("noconv");
  json c = disc_circle();
  c["families"][0] = {{"type", "ellipse"}, {"fourier", {{"p", {2.0}}, {"q", {1.0}}}}};
  c["newton"] = {{"max_iter", 1}};
  const auto cfg = s.write("c.json", c);
  CHECK(run({"solve", "--config", cfg.string(), "--out", (s.dir / "out").string()}) == kNoConvergence);
  CHECK(fs::exists(s.dir / "out" / "history.csv"));
}

TEST_CASE("check-identity exit codes") {
  Scratch s("identity");
  const auto out = s.dir / "out";
  const auto fz = s.write("fz.json", radial_pair(0.5));
  CHECK(run({"check-identity", "--config", fz.string(), "--out", out.string()}) == kOk);
  const json rep = json::parse(slurp(out / "identity.json"));
  CHECK(rep.at("diff").get<double>() < 1e-12);
  CHECK(rep.at("k1").get<int>() == 1);

  json wrong = radial_pair(0.5);
  wrong["identity"] = {{"assumed_k1", 0}};
  const auto w = s.write("wrong.json", wrong);
  CHECK(run({"check-identity", "--config", w.string(), "--out", out.string()}) == kIdentityMismatch);

  json ellipse = radial_pair(0.5);
  ellipse["families"][0] = {{"type", "ellipse"}, {"fourier", {{"p", {2.0}}, {"q", {1.0}}}}};
  ellipse["method"] = "glue";
  const auto e = s.write("ellipse.json", ellipse);
  CHECK(run({"check-identity", "--config", e.string(), "--out", out.string()}) == kConfigError);
}

TEST_CASE("sweep rows and fit") {
  Scratch s("sweep");
  json c = radial_pair(1.0);
  c.erase("method");
  const auto cfg = s.write("c.json", c);
  const auto out = s.dir / "out";
  CHECK(run({"sweep", "--config", cfg.string(), "--out", out.string(), "--n-range", "5:5"}) == kOk);
  {
    const std::string csv = slurp(out / "sweep.csv");
    CHECK(csv.rfind("n,pre_newton_residual,collar_norm,fitted_slope\n", 0) == 0);
    CHECK(csv.find("\nfit,") == std::string::npos);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
  }
  CHECK(run({"sweep", "--config", cfg.string(), "--out", out.string(), "--n-range", "4:8"}) == kOk);
  {
    const std::string csv = slurp(out / "sweep.csv");
    CHECK(csv.find("\nfit,,,") != std::string::npos);
    const json j = json::parse(slurp(out / "sweep.json"));
    CHECK(j.at("rows").size() == 5);
    CHECK(j.at("fit").at("slope").get<double>() < 0.0);
  }
  CHECK(run({"sweep", "--config", cfg.string(), "--out", out.string(), "--n-range", "8:4"}) == kConfigError);
}

TEST_CASE("surjectivity demo without a config") {
  Scratch s("demo");
  const auto out = s.dir / "out";
  CHECK(run({"demo-surjectivity", "--q", "0.25", "--out", out.string()}) == kOk);
  const json j = json::parse(slurp(out / "surjectivity.json"));
  CHECK(j.at("rows").size() == 10);
  for (const json& r : j.at("rows")) CHECK(r.at("error").get<double>() < 1e-6);
  CHECK(run({"demo-surjectivity", "--q", "1.5", "--out", out.string()}) == kConfigError);
}

TEST_CASE("command line errors") {
  CHECK(run({}) == kConfigError);
  CHECK(run({"levitate"}) == kConfigError);
  CHECK(run({"solve"}) == kConfigError);
}
