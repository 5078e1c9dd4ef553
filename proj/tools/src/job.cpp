#include "job.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "inscribed/error.hpp"
#include "inscribed/json_io.hpp"
#include "render.hpp"

namespace inscribed::app {
namespace {

namespace fs = std::filesystem;
using inscribe::InscribedSolution;
using simspace::Pose;
using simspace::SimilarityClass;
using simspace::SimplexConfig;
using spheres::RadialEmbedding;
using spheres::SpherePoint;

constexpr const char* kGenericityAdvice =
    "the embedding may be non-generic for this search; perturb the radial function by a small trigonometric "
    "term (for example add 1e-3*cos(7*theta)) and rerun";

// ---- validation ----

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError("unknown key \"" + key + "\" in " + where);
  }
}

void require_number(const json& obj, const char* key, const std::string& where, double lo = -INFINITY,
                    double hi = INFINITY) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + " must be a number");
  const double x = v.get<double>();
  if (!(x >= lo && x <= hi)) throw ConfigError(where + "." + key + " is out of range");
}

void require_integer(const json& obj, const char* key, const std::string& where, long long lo, long long hi) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError(where + "." + key + " must be an integer");
  const auto x = v.get<long long>();
  if (x < lo || x > hi) throw ConfigError(where + "." + key + " is out of range");
}

void require_bool(const json& obj, const char* key, const std::string& where) {
  if (obj.contains(key) && !obj.at(key).is_boolean()) throw ConfigError(where + "." + key + " must be a boolean");
}

void require_string(const json& obj, const char* key, const std::string& where) {
  if (obj.contains(key) && !obj.at(key).is_string()) throw ConfigError(where + "." + key + " must be a string");
}

Eigen::MatrixXd numeric_matrix(const json& v, const std::string& where) {
  try {
    return io::matrix_from_json(v);
  } catch (const Error& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

Task parse_task(const json& v) {
  if (!v.is_string()) throw ConfigError("task must be a string");
  const std::string t = v.get<std::string>();
  if (t == "cm") return Task::Cm;
  if (t == "find") return Task::Find;
  if (t == "sweep") return Task::Sweep;
  if (t == "trace") return Task::Trace;
  if (t == "degree") return Task::Degree;
  if (t == "coverage") return Task::Coverage;
  if (t == "render") return Task::Render;
  throw ConfigError("unknown task \"" + t + "\"");
}

// A square table, or the upper triangle d01, d02, ..., d12, ... as a flat list.
Eigen::MatrixXd distance_table(const json& v) {
  if (v.is_array() && !v.empty() && v.front().is_number()) {
    const auto m = static_cast<int>(v.size());
    int n = 2;
    while (n * (n - 1) / 2 < m) ++n;
    if (n * (n - 1) / 2 != m) throw ConfigError("simplex.distances: flat list length must be n(n-1)/2");
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    int at = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j, ++at) {
        if (!v[at].is_number()) throw ConfigError("simplex.distances must be numeric");
        d(i, j) = d(j, i) = v[at].get<double>();
      }
    return d;
  }
  const Eigen::MatrixXd d = numeric_matrix(v, "simplex.distances");
  if (d.rows() != d.cols()) throw ConfigError("simplex.distances must be square");
  return d;
}

// Dimension k of the simplex block, or 0 for a distance table.
int validate_simplex(const json& s) {
  check_keys(s, "simplex", {"points", "distances"});
  if (s.contains("points") == s.contains("distances")) {
    throw ConfigError("simplex needs exactly one of \"points\" and \"distances\"");
  }
  if (s.contains("points")) {
    const Eigen::MatrixXd p = numeric_matrix(s.at("points"), "simplex.points");
    if (p.rows() != p.cols() + 1) throw ConfigError("simplex.points must list k + 1 points in R^k");
    return static_cast<int>(p.cols());
  }
  distance_table(s.at("distances"));
  return 0;
}

void validate_pose(const json& p, int k) {
  check_keys(p, "pose", {"matrix", "angle", "reflected", "axis", "samples"});
  require_number(p, "angle", "pose");
  require_bool(p, "reflected", "pose");
  require_integer(p, "samples", "pose", 1, 1000000);
  if (p.contains("matrix") && p.contains("angle")) throw ConfigError("pose takes \"matrix\" or \"angle\", not both");
  if (p.contains("matrix")) {
    const Eigen::MatrixXd m = numeric_matrix(p.at("matrix"), "pose.matrix");
    if (m.rows() != k || m.cols() != k) throw ConfigError("pose.matrix must be k x k");
    try {
      Pose check(m, 1e-8);
    } catch (const Error& e) {
      throw ConfigError(std::string("pose.matrix: ") + e.what());
    }
  }
  if (p.contains("angle") && k != 2) throw ConfigError("pose.angle is for planar curves (k = 2)");
  if (p.contains("axis")) {
    if (k != 3) throw ConfigError("pose.axis is for surfaces (k = 3)");
    const json& a = p.at("axis");
    if (!a.is_array() || a.size() != 3) throw ConfigError("pose.axis must have three components");
    for (const auto& x : a)
      if (!x.is_number()) throw ConfigError("pose.axis must be numeric");
  }
}

}  // namespace

std::string to_string(Task task) {
  switch (task) {
    case Task::Cm: return "cm";
    case Task::Find: return "find";
    case Task::Sweep: return "sweep";
    case Task::Trace: return "trace";
    case Task::Degree: return "degree";
    case Task::Coverage: return "coverage";
    case Task::Render: return "render";
  }
  return "?";
}

JobConfig parse_job(const json& doc) {
  check_keys(doc, "the job",
             {"task", "description", "simplex", "embedding", "pose", "start_angles", "solver", "homotopy", "trace",
              "search", "coverage", "seed", "output", "render"});
  if (!doc.contains("task")) throw ConfigError("missing \"task\"");
  JobConfig job;
  job.task = parse_task(doc.at("task"));
  job.source = doc;
  require_string(doc, "description", "the job");

  if (doc.contains("seed")) {
    if (!doc.at("seed").is_number_unsigned()) throw ConfigError("seed must be a nonnegative integer");
    job.seed = doc.at("seed").get<std::uint64_t>();
  }
  if (doc.contains("output")) {
    const json& o = doc.at("output");
    check_keys(o, "output", {"dir", "report", "csv", "svg"});
    for (const char* key : {"dir", "report", "csv", "svg"}) require_string(o, key, "output");
    job.output.dir = o.value("dir", job.output.dir);
    job.output.report = o.value("report", job.output.report);
    job.output.csv = o.value("csv", job.output.csv);
    job.output.svg = o.value("svg", job.output.svg);
  }
  if (doc.contains("solver")) {
    const json& s = doc.at("solver");
    check_keys(s, "solver", {"tolerance", "max_iterations", "lambda_min", "condition_warning", "check_jacobian"});
    require_number(s, "tolerance", "solver", 1e-16, 1.0);
    require_integer(s, "max_iterations", "solver", 1, 100000);
    require_number(s, "lambda_min", "solver", 0.0, 1.0);
    require_number(s, "condition_warning", "solver", 1.0);
    require_bool(s, "check_jacobian", "solver");
  }
  if (doc.contains("homotopy")) {
    const json& h = doc.at("homotopy");
    check_keys(h, "homotopy", {"steps", "dt_min", "max_chart_step"});
    require_integer(h, "steps", "homotopy", 1, 1000000);
    require_number(h, "dt_min", "homotopy", 1e-12, 1.0);
    require_number(h, "max_chart_step", "homotopy", 1e-6, 3.2);
  }
  if (doc.contains("trace")) {
    const json& t = doc.at("trace");
    check_keys(t, "trace", {"n_steps", "max_step", "min_step", "max_steps_factor", "closure_tolerance"});
    require_integer(t, "n_steps", "trace", 4, 1000000);
    require_number(t, "max_step", "trace", 1e-6, 1.0);
    require_number(t, "min_step", "trace", 1e-14, 1.0);
    require_integer(t, "max_steps_factor", "trace", 1, 100000);
    require_number(t, "closure_tolerance", "trace", 1e-14, 1.0);
  }
  if (doc.contains("search")) {
    const json& s = doc.at("search");
    check_keys(s, "search",
               {"pose_samples", "pose_offset", "random_restarts", "reflected", "threads", "dedup_tolerance"});
    require_integer(s, "pose_samples", "search", 1, 100000);
    require_number(s, "pose_offset", "search");
    require_integer(s, "random_restarts", "search", 0, 100000);
    require_bool(s, "reflected", "search");
    require_integer(s, "threads", "search", 0, 1024);
    require_number(s, "dedup_tolerance", "search", 1e-14, 1.0);
  }
  if (doc.contains("coverage")) {
    const json& c = doc.at("coverage");
    check_keys(c, "coverage", {"samples", "reflected", "threads"});
    require_integer(c, "samples", "coverage", 1, 1000000);
    require_bool(c, "reflected", "coverage");
    require_integer(c, "threads", "coverage", 0, 1024);
  }
  if (doc.contains("render")) {
    const json& r = doc.at("render");
    check_keys(r, "render", {"report", "frames"});
    require_string(r, "report", "render");
    require_integer(r, "frames", "render", 1, 10000);
  }

  int k = -1;
  if (doc.contains("simplex")) k = validate_simplex(doc.at("simplex"));
  int embedding_dim = -1;
  if (doc.contains("embedding")) {
    try {
      embedding_dim = io::embedding_from_json(doc.at("embedding")).dim();
    } catch (const Error& e) {
      throw ConfigError(std::string("embedding: ") + e.what());
    } catch (const json::exception& e) {
      throw ConfigError(std::string("embedding: ") + e.what());
    }
  }

  switch (job.task) {
    case Task::Cm:
      if (k < 0) throw ConfigError("task cm needs a simplex");
      break;
    case Task::Render:
      if (!doc.contains("render") || !doc.at("render").contains("report")) {
        throw ConfigError("task render needs render.report (the report to draw)");
      }
      break;
    default:
      if (k <= 0) throw ConfigError("task " + to_string(job.task) + " needs simplex.points");
      if (embedding_dim < 0) throw ConfigError("task " + to_string(job.task) + " needs an embedding");
      if (embedding_dim != k) throw ConfigError("simplex and embedding dimensions differ");
      if (k != 2 && k != 3) throw ConfigError("only k = 2 and k = 3 are supported");
      break;
  }
  if (doc.contains("pose")) validate_pose(doc.at("pose"), k);
  if (doc.contains("start_angles")) {
    if (job.task != Task::Find) throw ConfigError("start_angles is only used by task find");
    const Eigen::MatrixXd a = numeric_matrix(doc.at("start_angles"), "start_angles");
    if (a.rows() != k + 1 || a.cols() != k - 1) {
      throw ConfigError("start_angles needs k + 1 rows of [theta] (k = 2) or [phi, theta] (k = 3)");
    }
  }
  if (job.task == Task::Find && !doc.contains("pose") && !doc.contains("start_angles")) {
    throw ConfigError("task find needs a pose or start_angles");
  }
  if (job.task == Task::Sweep &&
      !(doc.contains("pose") && (doc.at("pose").contains("matrix") || doc.at("pose").contains("angle")))) {
    throw ConfigError("task sweep needs pose.matrix or pose.angle");
  }
  if (job.task == Task::Degree && k != 2) throw ConfigError("task degree is for planar curves (k = 2)");
  if (job.task == Task::Coverage && k != 3) throw ConfigError("task coverage is for surfaces (k = 3)");
  return job;
}

namespace {

// ---- execution ----

struct Context {
  const JobConfig& job;
  const RunOptions& options;
  const json& doc;
  std::uint64_t seed;
  fs::path dir;
  RunResult result;
};

inscribe::SolverOptions solver_options(const Context& ctx) {
  inscribe::SolverOptions o;
  if (ctx.doc.contains("solver")) {
    const json& s = ctx.doc.at("solver");
    o.tolerance = s.value("tolerance", o.tolerance);
    o.max_iterations = s.value("max_iterations", o.max_iterations);
    o.lambda_min = s.value("lambda_min", o.lambda_min);
    o.condition_warning = s.value("condition_warning", o.condition_warning);
    o.check_jacobian = s.value("check_jacobian", o.check_jacobian);
  }
  o.check_jacobian = o.check_jacobian || ctx.options.check_jacobian;
  return o;
}

inscribe::HomotopyOptions homotopy_options(const Context& ctx) {
  inscribe::HomotopyOptions o;
  if (ctx.doc.contains("homotopy")) {
    const json& h = ctx.doc.at("homotopy");
    o.steps = h.value("steps", o.steps);
    o.dt_min = h.value("dt_min", o.dt_min);
    o.max_chart_step = h.value("max_chart_step", o.max_chart_step);
  }
  o.newton = solver_options(ctx);
  return o;
}

inscribe::TraceOptions trace_options(const Context& ctx) {
  inscribe::TraceOptions o;
  if (ctx.doc.contains("trace")) {
    const json& t = ctx.doc.at("trace");
    o.n_steps = t.value("n_steps", o.n_steps);
    o.max_step = t.value("max_step", o.max_step);
    o.min_step = t.value("min_step", o.min_step);
    o.max_steps_factor = t.value("max_steps_factor", o.max_steps_factor);
    o.closure_tolerance = t.value("closure_tolerance", o.closure_tolerance);
  }
  o.newton = solver_options(ctx);
  return o;
}

Pose configured_pose(const json& doc, int k) {
  const json p = doc.value("pose", json::object());
  if (p.contains("matrix")) return Pose(io::matrix_from_json(p.at("matrix")), 1e-8);
  if (k == 2) return Pose::planar(p.value("angle", 0.0), p.value("reflected", false));
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(3, 3);
  if (p.value("reflected", false)) m(2, 2) = -1.0;
  return Pose(m);
}

std::string csv_header(int k, int vertices, const char* param) {
  std::ostringstream os;
  os << "row," << param;
  const char* axis[] = {"x", "y", "z"};
  for (int i = 0; i < vertices; ++i)
    for (int a = 0; a < k; ++a) os << ',' << axis[a] << i;
  os << '\n';
  return os.str();
}

void csv_row(std::ostringstream& os, int row, double param, const Eigen::MatrixXd& q) {
  os << row << ',' << param;
  for (Eigen::Index i = 0; i < q.cols(); ++i)
    for (Eigen::Index a = 0; a < q.rows(); ++a) os << ',' << q(a, i);
  os << '\n';
}

void write_file(Context& ctx, const std::string& name, const std::string& text) {
  const fs::path path = ctx.dir / name;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
  ctx.result.written.push_back(path.string());
}

bool any_nontransverse(const std::vector<InscribedSolution>& sols) {
  for (const auto& s : sols)
    if (s.near_nontransverse) return true;
  return false;
}

void run_cm(Context& ctx, json& result) {
  const json& s = ctx.doc.at("simplex");
  distgeo::DistanceSet d = distgeo::DistanceSet::triangle(1, 1, 1);
  std::optional<Eigen::MatrixXd> points;
  try {
    if (s.contains("points")) {
      points = io::matrix_from_json(s.at("points")).transpose();
      d = distgeo::distances_of(*points);
    } else {
      d = distgeo::DistanceSet::from_table(distance_table(s.at("distances")));
    }
  } catch (const Error& e) {
    throw ConfigError(std::string("simplex: ") + e.what());
  }
  const auto report = distgeo::is_constructible(d);
  result["distances"] = io::matrix_to_json(d.table());
  result["cm_determinant"] = distgeo::cm_det(d);
  result["constructibility"] = io::constructibility_to_json(report);
  result["volume"] = nullptr;
  result["circumradius"] = nullptr;
  if (report.constructible) {
    result["volume"] = distgeo::simplex_volume(d);
    result["circumradius"] = distgeo::circumradius(d);
    if (points && points->rows() + 1 == points->cols()) {
      const auto sphere = distgeo::circumcenter(*points);
      result["circumcenter"] = io::vector_to_json(sphere.center);
    }
  }
  std::ostringstream os;
  os << "CM determinant " << std::setprecision(10) << distgeo::cm_det(d) << (report.constructible ? ", constructible" : ", not constructible");
  ctx.result.summary = os.str();
}

void run_find(Context& ctx, json& result, const SimilarityClass& cls, const RadialEmbedding& gamma) {
  const int k = cls.dim();
  inscribe::InscribedState x0;
  std::optional<Pose> pose;
  if (ctx.doc.contains("pose")) pose = configured_pose(ctx.doc, k);
  if (ctx.doc.contains("start_angles")) {
    const Eigen::MatrixXd a = io::matrix_from_json(ctx.doc.at("start_angles"));
    Eigen::MatrixXd s(k, k + 1);
    for (int i = 0; i <= k; ++i) {
      x0.u.push_back(k == 2 ? SpherePoint::from_angle(a(i, 0)) : SpherePoint::from_spherical(a(i, 0), a(i, 1)));
      s.col(i) = gamma.eval(x0.u.back());
    }
    x0.center = s.col(0);
    x0.lambda = (s.col(1) - s.col(0)).norm();
    if (!pose) {
      // pose of the seed configuration: polar factor of Pi(seed) P^-1
      pose = simspace::polar_decompose(simspace::direction_matrix(SimplexConfig(s)) * cls.p_inverse()).u;
    }
    result["seed_residual"] = inscribe::residual(x0, *pose, cls, gamma).norm();
  } else {
    x0 = inscribe::initial_guess_round(*pose, cls);
  }
  result["pose"] = io::pose_to_json(*pose);
  const auto r = inscribe::newton_solve(x0, *pose, cls, gamma, solver_options(ctx));
  result["solver_status"] = inscribe::to_string(r.status);
  result["iterations"] = r.iterations;
  result["residual_norm"] = r.residual_norm;
  if (!r.ok()) {
    ctx.result.exit_code = 1;
    ctx.result.summary = "failed: " + r.message;
    result["message"] = r.message;
    return;
  }
  result["solution"] = io::solution_to_json(*r.solution, gamma);
  if (r.solution->near_nontransverse) result["advice"] = kGenericityAdvice;
  std::ostringstream csv;
  csv << std::setprecision(17) << csv_header(k, k + 1, "t");
  csv_row(csv, 0, r.solution->t, r.solution->vertices(gamma));
  write_file(ctx, ctx.job.output.csv, csv.str());
  std::ostringstream os;
  os << "converged in " << r.iterations << " iterations, residual " << std::setprecision(3) << r.residual_norm;
  ctx.result.summary = os.str();
}

void run_sweep(Context& ctx, json& result, const SimilarityClass& cls, const RadialEmbedding& gamma) {
  const int k = cls.dim();
  const Pose pose = configured_pose(ctx.doc, k);
  const auto sweep = inscribe::sweep_homotopy(pose, cls, gamma, homotopy_options(ctx));
  result["sweep"] = io::sweep_to_json(sweep, gamma);
  std::ostringstream csv;
  csv << std::setprecision(17) << csv_header(k, k + 1, "t");
  int row = 0;
  for (const auto& s : sweep.path) csv_row(csv, row++, s.t, s.vertices(gamma.isotopy(s.t)));
  write_file(ctx, ctx.job.output.csv, csv.str());
  if (!sweep.completed) {
    ctx.result.exit_code = 1;
    result["advice"] = kGenericityAdvice;
    ctx.result.summary = "sweep stopped: " + sweep.message;
    return;
  }
  if (any_nontransverse(sweep.path)) result["advice"] = kGenericityAdvice;
  ctx.result.summary = "sweep reached t = 1 in " + std::to_string(sweep.path.size() - 1) + " steps";
}

void trace_csv(Context& ctx, const std::vector<inscribe::FamilyTrace>& traces, const RadialEmbedding& gamma, int k) {
  std::ostringstream csv;
  csv << std::setprecision(17) << "loop," << csv_header(k, k + 1, "s");
  for (std::size_t l = 0; l < traces.size(); ++l) {
    for (std::size_t i = 0; i < traces[l].solutions.size(); ++i) {
      csv << l << ',';
      csv_row(csv, static_cast<int>(i), traces[l].path_params[i], traces[l].solutions[i].vertices(gamma));
    }
  }
  write_file(ctx, ctx.job.output.csv, csv.str());
}

void run_trace(Context& ctx, json& result, const SimilarityClass& cls, const RadialEmbedding& gamma) {
  const int k = cls.dim();
  const Pose base = configured_pose(ctx.doc, k);
  Eigen::Vector3d axis(0, 0, 1);
  if (k == 3 && ctx.doc.contains("pose") && ctx.doc.at("pose").contains("axis")) {
    const json& a = ctx.doc.at("pose").at("axis");
    axis = Eigen::Vector3d(a[0].get<double>(), a[1].get<double>(), a[2].get<double>());
  }
  const auto path = k == 2 ? inscribe::PosePath::planar(base) : inscribe::PosePath::about_axis(base, axis);
  const auto trace = inscribe::trace_pose_loop(cls, gamma, path, trace_options(ctx), homotopy_options(ctx));
  result["trace"] = io::trace_to_json(trace, gamma);
  trace_csv(ctx, {trace}, gamma, k);
  if (!trace.closed) {
    ctx.result.exit_code = 1;
    result["advice"] = kGenericityAdvice;
    ctx.result.summary = "trace did not close: " + trace.message;
    return;
  }
  if (any_nontransverse(trace.solutions)) result["advice"] = kGenericityAdvice;
  ctx.result.summary = "closed loop after " + std::to_string(trace.arc_steps) + " steps" +
                       (k == 2 ? ", pose winding " + std::to_string(trace.pose_winding) : std::string());
}

void run_degree(Context& ctx, json& result, const SimilarityClass& cls, const RadialEmbedding& gamma) {
  inscribe::LoopSearchOptions o;
  o.seed = ctx.seed;
  o.trace = trace_options(ctx);
  o.homotopy = homotopy_options(ctx);
  if (ctx.doc.contains("search")) {
    const json& s = ctx.doc.at("search");
    o.pose_samples = s.value("pose_samples", o.pose_samples);
    o.pose_offset = s.value("pose_offset", o.pose_offset);
    o.random_restarts = s.value("random_restarts", o.random_restarts);
    o.reflected = s.value("reflected", o.reflected);
    o.threads = s.value("threads", o.threads);
    o.dedup_tolerance = s.value("dedup_tolerance", o.dedup_tolerance);
  }
  const auto census = inscribe::find_all_loops(cls, gamma, o);
  result["census"] = io::census_to_json(census, gamma);
  trace_csv(ctx, census.loops, gamma, 2);
  try {
    const int degree = inscribe::degree_sum(census.loops);
    result["degree_sum"] = degree;
    ctx.result.summary = std::to_string(census.loops.size()) + " loop(s), degree sum " + std::to_string(degree);
    bool flagged = false;
    for (const auto& l : census.loops) flagged = flagged || any_nontransverse(l.solutions);
    if (flagged) result["advice"] = kGenericityAdvice;
  } catch (const Error& e) {
    result["degree_sum"] = nullptr;
    result["message"] = e.what();
    result["advice"] = kGenericityAdvice;
    ctx.result.exit_code = 1;
    ctx.result.summary = std::string("degree refused: ") + e.what();
  }
}

void run_coverage(Context& ctx, json& result, const SimilarityClass& cls, const RadialEmbedding& gamma) {
  inscribe::CoverageOptions o;
  o.homotopy = homotopy_options(ctx);
  const json p = ctx.doc.value("pose", json::object());
  o.samples = p.value("samples", o.samples);
  o.reflected = p.value("reflected", o.reflected);
  if (ctx.doc.contains("coverage")) {
    const json& c = ctx.doc.at("coverage");
    o.samples = c.value("samples", o.samples);
    o.reflected = c.value("reflected", o.reflected);
    o.threads = c.value("threads", o.threads);
  }
  const auto report = inscribe::pose_coverage(cls, gamma, o);
  result["coverage"] = io::coverage_to_json(report);
  std::ostringstream os;
  os << report.successes << " of " << report.entries.size() << " poses reached t = 1";
  ctx.result.summary = os.str();
}

void run_render(Context& ctx, json& result) {
  const json& r = ctx.doc.at("render");
  const std::string path = r.at("report").get<std::string>();
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read report " + path);
  json report;
  try {
    report = json::parse(f);
  } catch (const json::exception& e) {
    throw ConfigError("report " + path + " is not JSON: " + e.what());
  }
  const int frames = r.value("frames", 12);
  write_file(ctx, ctx.job.output.svg, render_svg(report, frames));
  result["source_report"] = path;
  result["frames"] = frames;
  ctx.result.summary = std::to_string(frames) + " frame(s) requested from " + path;
}

}  // namespace

RunResult run_job(const JobConfig& job, const RunOptions& options) {
  Context ctx{job, options, job.source, options.seed.value_or(job.seed),
              fs::path(options.out_dir.value_or(job.output.dir)), {}};
  std::error_code ec;
  fs::create_directories(ctx.dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + ctx.dir.string());

  json& report = ctx.result.report;
  report["task"] = to_string(job.task);
  report["seed"] = ctx.seed;
  report["config"] = job.source;
  json result = json::object();

  if (job.task == Task::Cm) {
    run_cm(ctx, result);
  } else if (job.task == Task::Render) {
    run_render(ctx, result);
  } else {
    std::optional<SimilarityClass> cls;
    std::optional<RadialEmbedding> gamma;
    try {
      cls = simspace::normalize_reference(io::simplex_from_json(job.source.at("simplex").at("points")));
      gamma = io::embedding_from_json(job.source.at("embedding"));
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
    report["embedding"] = io::embedding_to_json(*gamma);
    report["class"] = {{"reference", io::simplex_to_json(cls->reference())}, {"base_edge", cls->base_edge()}};
    try {
      switch (job.task) {
        case Task::Find: run_find(ctx, result, *cls, *gamma); break;
        case Task::Sweep: run_sweep(ctx, result, *cls, *gamma); break;
        case Task::Trace: run_trace(ctx, result, *cls, *gamma); break;
        case Task::Degree: run_degree(ctx, result, *cls, *gamma); break;
        case Task::Coverage: run_coverage(ctx, result, *cls, *gamma); break;
        default: break;
      }
    } catch (const Error& e) {
      ctx.result.exit_code = 1;
      result["message"] = e.what();
      ctx.result.summary = e.what();
    }
  }
  report["status"] = ctx.result.exit_code == 0 ? "ok" : "failed";
  report["result"] = std::move(result);
  write_file(ctx, job.output.report, report.dump(2) + "\n");
  return std::move(ctx.result);
}

}  // namespace inscribed::app
