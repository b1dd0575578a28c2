#pragma once

// JSON forms of solver results and of curve family specifications.

#include "json.hpp"
#include "rhsolve/analysis.hpp"
#include "rhsolve/annulus_solver.hpp"
#include "rhsolve/curve_families.hpp"
#include "rhsolve/disc_solver.hpp"
#include "rhsolve/newton_engine.hpp"

namespace rhsolve {

using json = nlohmann::ordered_json;

json to_json(const NewtonCertificate& c);
json to_json(const HolderNormReport& h);
json to_json(const GlueReport& g);
json to_json(const std::vector<LocatedZero>& zeros);
json to_json(const DiscSolution& s, const std::vector<LocatedZero>& zeros);
json to_json(const AnnulusSolution& s);
json to_json(const IdentityReport& r);

/// {"type": "circle", "fourier": {"R": [...], "c": [...], "c_im": [...]}} or
/// {"type": "ellipse", "fourier": {"p": [...], "q": [...], "phi": [...]}}.
/// Coefficient lists are [c0, a1, b1, a2, b2, ...]. "c" is the real part of
/// the centre and "c_im" its imaginary part. Unknown keys are rejected.
/// Throws ConfigError.
CurveFamily parse_family(const json& spec);

}  // namespace rhsolve
