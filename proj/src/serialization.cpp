#include "rhsolve/serialization.hpp"

#include <set>
#include <string>

#include "rhsolve/errors.hpp"

namespace rhsolve {

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

TrigPolynomial coefficients(const json& fourier, const std::string& key, bool required) {
  if (!fourier.contains(key)) {
    if (required) throw ConfigError("family is missing fourier." + key);
    return {};
  }
  const json& a = fourier.at(key);
  if (!a.is_array() || a.empty()) throw ConfigError("fourier." + key + " must be a nonempty list");
  std::vector<double> c;
  for (const json& v : a) {
    if (!v.is_number()) throw ConfigError("fourier." + key + " must hold numbers");
    c.push_back(v.get<double>());
  }
  return TrigPolynomial(c);
}

}  // namespace

json to_json(const NewtonCertificate& c) {
  return {{"omega1", c.omega1},   {"omega2", c.omega2},       {"omega3", c.omega3},
          {"product", c.product}, {"certified", c.certified}, {"method", c.method},
          {"applicable", c.applicable}, {"fallback", c.fallback}};
}

json to_json(const HolderNormReport& h) {
  return {{"sup", h.sup_norm}, {"alpha", h.alpha}, {"c_alpha", h.c_alpha}, {"c1_alpha", h.c1_alpha}};
}

json to_json(const GlueReport& g) {
  return {{"n0", g.n0},
          {"n1", g.n1},
          {"grid", g.grid},
          {"pre_newton_residual", g.pre_newton_residual},
          {"dbar_norm", g.dbar_norm},
          {"collar_norm", g.collar_norm}};
}

json to_json(const std::vector<LocatedZero>& zeros) {
  json a = json::array();
  for (const LocatedZero& z : zeros)
    a.push_back({{"re", z.position.real()}, {"im", z.position.imag()}, {"mult", z.multiplicity}});
  return a;
}

json to_json(const DiscSolution& s, const std::vector<LocatedZero>& zeros) {
  json j = {{"domain", "disc"},
            {"grid", s.f_trace.size()},
            {"winding", s.winding},
            {"residual_sup", s.residual_sup},
            {"residual_holder", to_json(s.residual_holder)},
            {"iterations", s.iterations},
            {"damped", s.damped},
            {"refinements", s.refinements},
            {"newton_history", s.newton_history},
            {"zeros", to_json(zeros)}};
  j["certificate"] = s.certificate ? to_json(*s.certificate) : json(nullptr);
  return j;
}

json to_json(const AnnulusSolution& s) {
  json j = {{"domain", "annulus"},
            {"q", s.q},
            {"grid", s.gamma0.size()},
            {"windings",
             {{"gamma0", s.windings.gamma0},
              {"gamma1_coherent", s.windings.gamma1_coherent},
              {"gamma1_disc", s.windings.gamma1_disc}}},
            {"zeros", to_json(s.zeros)},
            {"residuals", {{"gamma0", s.residual_gamma0}, {"gamma1", s.residual_gamma1}}},
            {"iterations", s.iterations},
            {"damped", s.damped},
            {"newton_history", s.newton_history}};
  j["glue"] = s.glue ? to_json(*s.glue) : json(nullptr);
  j["certificate"] = s.certificate ? to_json(*s.certificate) : json(nullptr);
  return j;
}

json to_json(const IdentityReport& r) {
  json zeros = json::array();
  for (const IdentityZero& z : r.zeros_used)
    zeros.push_back({{"re", z.position.real()}, {"im", z.position.imag()}, {"mult", z.multiplicity},
                     {"h1", z.h1}});
  return {{"lhs", r.lhs},  {"rhs", r.rhs},       {"diff", r.diff},
          {"k1", r.k1},    {"k1_coherent", r.k1_coherent}, {"zeros", zeros}};
}

CurveFamily parse_family(const json& spec) {
  reject_unknown(spec, {"type", "fourier"}, "family");
  if (!spec.contains("type") || !spec.at("type").is_string())
    throw ConfigError("family needs a string 'type'");
  if (!spec.contains("fourier")) throw ConfigError("family needs 'fourier'");
  const std::string type = spec.at("type").get<std::string>();
  const json& f = spec.at("fourier");
  try {
    if (type == "circle") {
      reject_unknown(f, {"R", "c", "c_im"}, "circle fourier");
      const TrigPolynomial R = coefficients(f, "R", true);
      if (!(R.sampled_min() > 0.0)) throw ConfigError("circle radius must be positive");
      return builtin_circle_family(R, coefficients(f, "c", false), coefficients(f, "c_im", false));
    }
    if (type == "ellipse") {
      reject_unknown(f, {"p", "q", "phi"}, "ellipse fourier");
      return builtin_ellipse_family(coefficients(f, "p", true), coefficients(f, "q", true),
                                    coefficients(f, "phi", false));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("invalid family: ") + e.what());
  }
  throw ConfigError("unknown family type '" + type + "'");
}

}  // namespace rhsolve
