#include "inscribed/json_io.hpp"

#include <cmath>

#include "inscribed/error.hpp"

namespace inscribed::io {

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) {
    throw Error(ErrorKind::InvalidArgument, "expected a nonempty array of rows");
  }
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw Error(ErrorKind::InvalidArgument, "ragged matrix");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      const json& x = row[static_cast<std::size_t>(c)];
      if (!x.is_number()) throw Error(ErrorKind::InvalidArgument, "matrix entries must be numbers");
      m(r, c) = x.get<double>();
    }
  }
  return m;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Eigen::VectorXd vector_from_json(const json& j) {
  if (!j.is_array()) throw Error(ErrorKind::InvalidArgument, "expected an array of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw Error(ErrorKind::InvalidArgument, "expected an array of numbers");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

json simplex_to_json(const simspace::SimplexConfig& q) {
  return matrix_to_json(q.vertices().transpose());
}

simspace::SimplexConfig simplex_from_json(const json& j) {
  return simspace::SimplexConfig(matrix_from_json(j).transpose());
}

json pose_to_json(const simspace::Pose& u) {
  json out = {{"matrix", matrix_to_json(u.matrix())}, {"det_sign", u.det_sign()}};
  if (u.dim() == 2) out["angle"] = u.planar_angle();
  return out;
}

json params_to_json(const simspace::SimParams& p) {
  return {{"pose", pose_to_json(p.pose)}, {"lambda", p.lambda}, {"center", vector_to_json(p.center)}};
}

simspace::SimParams params_from_json(const json& j) {
  return simspace::SimParams{simspace::Pose(matrix_from_json(j.at("pose").at("matrix"))), j.at("lambda").get<double>(),
                             vector_from_json(j.at("center"))};
}

json constructibility_to_json(const distgeo::ConstructibilityReport& r) {
  json subsets = json::array();
  for (const auto& s : r.subsets) {
    subsets.push_back({{"subset", s.subset}, {"determinant", s.determinant}, {"expected_sign", s.expected_sign},
                       {"ok", s.ok}});
  }
  return {{"constructible", r.constructible}, {"subsets", std::move(subsets)}};
}

spheres::RadialEmbedding embedding_from_json(const json& j) {
  using spheres::RadialEmbedding;
  if (!j.is_object() || !j.contains("family")) {
    throw Error(ErrorKind::InvalidArgument, "embedding needs a \"family\"");
  }
  const std::string family = j.at("family").get<std::string>();
  const auto check_keys = [&](std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : j.items()) {
      bool ok = key == "family";
      for (const char* a : allowed) ok = ok || key == a;
      if (!ok) throw Error(ErrorKind::InvalidArgument, "unknown embedding key \"" + key + "\" for " + family);
    }
  };
  if (family == "round") {
    check_keys({"dim"});
    return RadialEmbedding::round(j.value("dim", 2));
  }
  if (family == "ellipse") {
    check_keys({"a", "b"});
    return RadialEmbedding::ellipse(j.at("a").get<double>(), j.at("b").get<double>());
  }
  if (family == "trig") {
    check_keys({"cos", "sin"});
    return RadialEmbedding::trig(j.value("cos", std::vector<double>{1.0}), j.value("sin", std::vector<double>{}));
  }
  if (family == "expression") {
    check_keys({"source", "dim"});
    return RadialEmbedding::expression(j.at("source").get<std::string>(), j.value("dim", 2));
  }
  throw Error(ErrorKind::InvalidArgument, "unknown embedding family \"" + family + "\"");
}

json embedding_to_json(const spheres::RadialEmbedding& gamma) {
  using spheres::Family;
  json out;
  switch (gamma.family()) {
    case Family::Round:
      out = {{"family", "round"}, {"dim", gamma.dim()}};
      break;
    case Family::Ellipse:
      out = {{"family", "ellipse"}, {"a", gamma.parameters().at(0)}, {"b", gamma.parameters().at(1)}};
      break;
    case Family::Trig:
      out = {{"family", "trig"}, {"cos", gamma.parameters()}, {"sin", gamma.sin_parameters()}};
      break;
    case Family::Expression:
      out = {{"family", "expression"}, {"source", gamma.expression_source()}, {"dim", gamma.dim()}};
      break;
  }
  return out;
}

json solution_to_json(const inscribe::InscribedSolution& s, const spheres::RadialEmbedding& gamma) {
  const spheres::RadialEmbedding g = gamma.isotopy(s.t);
  const Eigen::MatrixXd q = s.vertices(g);
  json angles = json::array();
  for (const auto& u : s.state.u) {
    if (u.dim() == 2) {
      angles.push_back({{"theta", u.theta()}});
    } else {
      angles.push_back({{"phi", u.phi()}, {"theta", u.theta()}});
    }
  }
  json edges = json::array();
  for (Eigen::Index i = 0; i < q.cols(); ++i) {
    for (Eigen::Index j = i + 1; j < q.cols(); ++j) edges.push_back((q.col(i) - q.col(j)).norm());
  }
  json out = {{"vertices", matrix_to_json(q.transpose())},
              {"angles", std::move(angles)},
              {"edge_lengths", std::move(edges)},
              {"params", params_to_json(s.params)},
              {"residual_norm", s.residual_norm},
              {"jacobian_condition", s.jacobian_condition},
              {"near_nontransverse", s.near_nontransverse},
              {"t", s.t},
              {"iterations", s.iterations}};
  if (s.jacobian_check_error) out["jacobian_check_error"] = *s.jacobian_check_error;
  return out;
}

json sweep_to_json(const inscribe::SweepResult& r, const spheres::RadialEmbedding& gamma) {
  json path = json::array();
  for (const auto& s : r.path) path.push_back(solution_to_json(s, gamma));
  return {{"completed", r.completed},       {"last_good_t", r.last_good_t}, {"last_condition", r.last_condition},
          {"rejected_steps", r.rejected_steps}, {"message", r.message},       {"path", std::move(path)}};
}

json trace_to_json(const inscribe::FamilyTrace& t, const spheres::RadialEmbedding& gamma) {
  json sols = json::array();
  for (const auto& s : t.solutions) sols.push_back(solution_to_json(s, gamma));
  return {{"closed", t.closed},
          {"pose_winding", t.pose_winding},
          {"vertex_winding", t.vertex_winding},
          {"arc_steps", t.arc_steps},
          {"closure_error", t.closure_error},
          {"message", t.message},
          {"path_params", t.path_params},
          {"solutions", std::move(sols)}};
}

json census_to_json(const inscribe::LoopCensus& c, const spheres::RadialEmbedding& gamma) {
  json loops = json::array();
  for (const auto& l : c.loops) loops.push_back(trace_to_json(l, gamma));
  return {{"seed", c.seed}, {"candidates", c.candidates}, {"failures", c.failures}, {"loops", std::move(loops)}};
}

json coverage_to_json(const inscribe::CoverageReport& r) {
  json entries = json::array();
  for (const auto& e : r.entries) {
    entries.push_back({{"pose", pose_to_json(e.pose)},
                       {"success", e.success},
                       {"last_good_t", e.last_good_t},
                       {"condition", e.condition},
                       {"message", e.message}});
  }
  return {{"samples", r.entries.size()},
          {"successes", r.successes},
          {"success_fraction", r.success_fraction()},
          {"entries", std::move(entries)}};
}

}  // namespace inscribed::io
