#include <algorithm>
#include <fstream>
#include <set>

#include "rhsolve/cli.hpp"
#include "rhsolve/errors.hpp"

namespace rhsolve::cli {

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

template <class T>
T get(const json& obj, const std::string& key, const std::string& where) {
  try {
    return obj.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(where + "." + key + " has the wrong type");
  }
}

int positive_grid(int n, const std::string& what) {
  if (n < 16 || (n & (n - 1)) != 0) throw ConfigError(what + " must be a power of two >= 16");
  return n;
}

}  // namespace

bool RunConfig::wants(const std::string& format) const {
  return std::find(formats.begin(), formats.end(), format) != formats.end();
}

std::pair<int, int> parse_n_range(const std::string& text) {
  std::string a = text, b = text;
  for (const std::string sep : {":", ".."}) {
    const auto pos = text.find(sep);
    if (pos != std::string::npos) {
      a = text.substr(0, pos);
      b = text.substr(pos + sep.size());
      break;
    }
  }
  try {
    std::size_t ia = 0, ib = 0;
    const int lo = std::stoi(a, &ia), hi = std::stoi(b, &ib);
    if (ia != a.size() || ib != b.size()) throw ConfigError("bad n range '" + text + "'");
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw ConfigError("bad n range '" + text + "'");
  }
}

RunConfig parse_config(const json& doc) {
  reject_unknown(doc,
                 {"domain", "families", "windings", "method", "psi", "grid", "max_grid", "newton",
                  "outputs", "seed", "identity", "targets", "n_range"},
                 "config");
  RunConfig c;

  if (!doc.contains("domain")) throw ConfigError("config needs 'domain'");
  const json& dom = doc.at("domain");
  reject_unknown(dom, {"type", "q"}, "domain");
  const std::string type = get<std::string>(dom, "type", "domain");
  if (type == "annulus") {
    c.annulus = true;
    c.q = get<double>(dom, "q", "domain");
    if (!(c.q > 0.0 && c.q < 1.0)) throw ConfigError("domain.q must lie in (0, 1)");
  } else if (type == "disc") {
    if (dom.contains("q")) throw ConfigError("domain.q only applies to the annulus");
  } else {
    throw ConfigError("domain.type must be 'disc' or 'annulus'");
  }
  const std::size_t components = c.annulus ? 2 : 1;

  if (doc.contains("families")) {
    const json& f = doc.at("families");
    if (!f.is_array() || f.size() != components)
      throw ConfigError("families must list one family per boundary component");
    for (const json& spec : f) {
      c.families.push_back(parse_family(spec));
      c.family_specs.push_back(spec);
    }
  }

  if (doc.contains("windings")) {
    const json& w = doc.at("windings");
    if (w.is_number_integer()) {
      c.windings.assign(components, w.get<int>());
    } else if (w.is_array() && w.size() == components) {
      for (const json& v : w) {
        if (!v.is_number_integer()) throw ConfigError("windings must be integers");
        c.windings.push_back(v.get<int>());
      }
    } else {
      throw ConfigError("windings must be an integer or one integer per component");
    }
    for (int n : c.windings)
      if (n < 0) throw ConfigError("windings must be nonnegative");
  }

  if (doc.contains("method")) {
    c.method = get<std::string>(doc, "method", "config");
    if (c.method != "glue" && c.method != "radial")
      throw ConfigError("method must be 'glue' or 'radial'");
  }
  if (doc.contains("psi")) c.psi = get<double>(doc, "psi", "config");
  if (doc.contains("grid")) c.grid = positive_grid(get<int>(doc, "grid", "config"), "grid");
  if (doc.contains("max_grid"))
    c.max_grid = positive_grid(get<int>(doc, "max_grid", "config"), "max_grid");

  if (doc.contains("newton")) {
    const json& n = doc.at("newton");
    reject_unknown(n, {"tol", "max_iter", "damping", "certify"}, "newton");
    if (n.contains("tol")) c.tol = get<double>(n, "tol", "newton");
    if (n.contains("max_iter")) c.max_iter = get<int>(n, "max_iter", "newton");
    if (n.contains("damping")) c.damping = get<bool>(n, "damping", "newton");
    if (n.contains("certify")) c.certify = get<bool>(n, "certify", "newton");
    if (!(c.tol > 0.0) || c.max_iter < 1) throw ConfigError("newton.tol and max_iter must be positive");
  }

  if (doc.contains("outputs")) {
    const json& o = doc.at("outputs");
    reject_unknown(o, {"directory", "formats"}, "outputs");
    if (o.contains("directory")) c.out_dir = get<std::string>(o, "directory", "outputs");
    if (o.contains("formats")) {
      c.formats = get<std::vector<std::string>>(o, "formats", "outputs");
      for (const std::string& f : c.formats)
        if (f != "json" && f != "csv") throw ConfigError("unknown output format '" + f + "'");
    }
  }
  if (doc.contains("seed")) c.seed = get<std::uint64_t>(doc, "seed", "config");

  if (doc.contains("identity")) {
    const json& i = doc.at("identity");
    reject_unknown(i, {"bound", "assumed_k1"}, "identity");
    if (i.contains("bound")) c.identity_bound = get<double>(i, "bound", "identity");
    if (i.contains("assumed_k1")) c.assumed_k1 = get<int>(i, "assumed_k1", "identity");
  }
  if (doc.contains("targets")) {
    c.targets = get<std::vector<double>>(doc, "targets", "config");
    for (double t : c.targets)
      if (!(t >= 0.0 && t < 1.0)) throw ConfigError("targets must lie in [0, 1)");
  }
  if (doc.contains("n_range")) {
    const auto r = get<std::vector<int>>(doc, "n_range", "config");
    if (r.size() != 2) throw ConfigError("n_range must be [first, last]");
    c.n_range = std::make_pair(r[0], r[1]);
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(doc);
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r_squared = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  return f;
}

}  // namespace rhsolve::cli
