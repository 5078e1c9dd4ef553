#include "render.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "inscribed/error.hpp"
#include "inscribed/json_io.hpp"
#include "job.hpp"

namespace inscribed::app {
namespace {

using Point = std::array<double, 2>;
using Triangle = std::array<Point, 3>;

const nlohmann::json* solutions_of(const nlohmann::json& result) {
  if (result.contains("trace")) return &result.at("trace").at("solutions");
  if (result.contains("census") && !result.at("census").at("loops").empty()) {
    return &result.at("census").at("loops").at(0).at("solutions");
  }
  if (result.contains("sweep")) return &result.at("sweep").at("path");
  return nullptr;
}

Triangle triangle_of(const nlohmann::json& solution) {
  const Eigen::MatrixXd v = io::matrix_from_json(solution.at("vertices"));
  if (v.rows() != 3 || v.cols() != 2) throw ConfigError("render: solutions are not planar triangles");
  Triangle t;
  for (int i = 0; i < 3; ++i) t[i] = {v(i, 0), v(i, 1)};
  return t;
}

}  // namespace

std::string render_svg(const nlohmann::json& report, int frames) {
  if (!report.is_object() || !report.contains("embedding") || !report.contains("result")) {
    throw ConfigError("render: report has no embedding or result");
  }
  spheres::RadialEmbedding gamma = spheres::RadialEmbedding::round(2);
  try {
    gamma = io::embedding_from_json(report.at("embedding"));
  } catch (const Error& e) {
    throw ConfigError(std::string("render: ") + e.what());
  }
  if (gamma.dim() != 2) throw ConfigError("render: only planar curves can be drawn");

  std::vector<Triangle> triangles;
  const nlohmann::json& result = report.at("result");
  if (const auto* sols = solutions_of(result)) {
    const int n = static_cast<int>(sols->size());
    // a closed loop repeats its start as the last sample
    const int usable = n > 1 && result.contains("sweep") ? n : std::max(1, n - 1);
    const int count = std::min(frames, usable);
    for (int f = 0; f < count && n > 0; ++f) triangles.push_back(triangle_of(sols->at(f * usable / count)));
  } else if (result.contains("solution")) {
    triangles.push_back(triangle_of(result.at("solution")));
  }

  constexpr int kCurveSamples = 720;
  std::vector<Point> curve;
  double extent = 0.0;
  for (int i = 0; i < kCurveSamples; ++i) {
    const double theta = 2.0 * std::numbers::pi * i / kCurveSamples;
    const Eigen::VectorXd p = gamma.eval(spheres::SpherePoint::from_angle(theta));
    curve.push_back({p(0), p(1)});
    extent = std::max({extent, std::abs(p(0)), std::abs(p(1))});
  }
  for (const auto& t : triangles)
    for (const auto& p : t) extent = std::max({extent, std::abs(p[0]), std::abs(p[1])});
  extent *= 1.1;

  constexpr double kSize = 600.0;
  const auto sx = [&](double x) { return kSize / 2 + x / extent * kSize / 2; };
  const auto sy = [&](double y) { return kSize / 2 - y / extent * kSize / 2; };

  std::ostringstream os;
  os << std::fixed << std::setprecision(3);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize << "\" height=\"" << kSize
     << "\" viewBox=\"0 0 " << kSize << ' ' << kSize << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<polygon fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" points=\"";
  for (const auto& p : curve) os << sx(p[0]) << ',' << sy(p[1]) << ' ';
  os << "\"/>\n";
  const int n = static_cast<int>(triangles.size());
  for (int i = 0; i < n; ++i) {
    const double hue = 360.0 * i / std::max(1, n);
    os << "<polygon fill=\"none\" stroke=\"hsl(" << hue << ",70%,45%)\" stroke-width=\"1\" points=\"";
    for (const auto& p : triangles[i]) os << sx(p[0]) << ',' << sy(p[1]) << ' ';
    os << "\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace inscribed::app
