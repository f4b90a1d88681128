#include "dynreg/cloud_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace dynreg {

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Cloud parse_cloud(std::istream& is) {
  Cloud cloud;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    std::vector<double> values;
    std::string tok;
    while (ls >> tok) {
      try {
        std::size_t used = 0;
        const double v = std::stod(tok, &used);
        if (used != tok.size() || !std::isfinite(v)) throw std::invalid_argument(tok);
        values.push_back(v);
      } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(lineno) +
                         ": not a finite number: '" + tok + "'");
      }
    }
    if (values.size() != 3 && values.size() != 4) {
      throw ParseError("line " + std::to_string(lineno) +
                       ": expected 3 or 4 columns, got " +
                       std::to_string(values.size()));
    }
    cloud.points.emplace_back(values[0], values[1], values[2]);
    if (values.size() == 4) {
      cloud.sigmas.emplace_back(values[3]);
    } else {
      cloud.sigmas.emplace_back(std::nullopt);
    }
  }
  return cloud;
}

Cloud read_cloud(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ParseError("cannot open " + path.string());
  try {
    return parse_cloud(is);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

ProblemInstance make_instance(const Cloud& model, const Cloud& scene) {
  if (model.points.size() != scene.points.size()) {
    throw ParseError("model has " + std::to_string(model.points.size()) +
                     " points but scene has " +
                     std::to_string(scene.points.size()));
  }
  ProblemInstance inst;
  inst.model_points = model.points;
  inst.scene_points = scene.points;
  inst.sigmas.resize(model.points.size());
  for (std::size_t i = 0; i < model.points.size(); ++i) {
    const auto& a = model.sigmas[i];
    const auto& b = scene.sigmas[i];
    if (a && b && *a != *b) {
      throw ParseError("sigma mismatch between model and scene at point " +
                       std::to_string(i + 1));
    }
    inst.sigmas[i] = a ? *a : (b ? *b : kDefaultFileSigma);
  }
  inst.validate();
  return inst;
}

ProblemInstance load_instance(const std::filesystem::path& model_path,
                              const std::filesystem::path& scene_path) {
  return make_instance(read_cloud(model_path), read_cloud(scene_path));
}

void write_cloud(std::ostream& os, const std::vector<Point3>& points,
                 const std::vector<double>& sigmas) {
  for (std::size_t i = 0; i < points.size(); ++i) {
    os << format_real(points[i].x()) << ' ' << format_real(points[i].y()) << ' '
       << format_real(points[i].z());
    if (i < sigmas.size()) os << ' ' << format_real(sigmas[i]);
    os << '\n';
  }
}

}  // namespace dynreg
