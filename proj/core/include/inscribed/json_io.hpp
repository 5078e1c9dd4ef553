#pragma once

// JSON forms of the library's values. Matrices are nested row-major arrays;
// angles are radians with phi measured from +z and theta the azimuth.

#include <nlohmann/json.hpp>

#include "inscribed/distance_geometry.hpp"
#include "inscribed/loops.hpp"

namespace inscribed::io {

using nlohmann::json;

json matrix_to_json(const Eigen::MatrixXd& m);
/// Throws Error(InvalidArgument) for ragged or non-numeric input.
Eigen::MatrixXd matrix_from_json(const json& j);
json vector_to_json(const Eigen::VectorXd& v);
Eigen::VectorXd vector_from_json(const json& j);

json simplex_to_json(const simspace::SimplexConfig& q);
/// Array of points, one per vertex.
simspace::SimplexConfig simplex_from_json(const json& j);

json pose_to_json(const simspace::Pose& u);
json params_to_json(const simspace::SimParams& p);
simspace::SimParams params_from_json(const json& j);

json constructibility_to_json(const distgeo::ConstructibilityReport& r);

/// {"family": "round"|"ellipse"|"trig"|"expression", ...}.
spheres::RadialEmbedding embedding_from_json(const json& j);
json embedding_to_json(const spheres::RadialEmbedding& gamma);

/// Includes the surface vertices gamma_t(u_i) and their edge lengths.
json solution_to_json(const inscribe::InscribedSolution& s, const spheres::RadialEmbedding& gamma);
json sweep_to_json(const inscribe::SweepResult& r, const spheres::RadialEmbedding& gamma);
json trace_to_json(const inscribe::FamilyTrace& t, const spheres::RadialEmbedding& gamma);
json census_to_json(const inscribe::LoopCensus& c, const spheres::RadialEmbedding& gamma);
json coverage_to_json(const inscribe::CoverageReport& r);

}  // namespace inscribed::io
