#pragma once

#include <string>

#include <nlohmann/json.hpp>

namespace inscribed::app {

/// SVG of a planar curve with inscribed triangles taken from a report of a
/// trace or degree job, `frames` of them evenly spaced along the first loop.
/// Reads only the report. Throws ConfigError for reports it cannot draw.
std::string render_svg(const nlohmann::json& report, int frames);

}  // namespace inscribed::app
