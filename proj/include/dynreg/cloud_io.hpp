#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dynreg/core.hpp"

namespace dynreg {

inline constexpr double kDefaultFileSigma = 0.01;

struct Cloud {
  std::vector<Point3> points;
  std::vector<std::optional<double>> sigmas;  // fourth column, if present
};

// One point per line: "x y z [sigma]". Blank lines and lines starting with
// '#' are skipped. Throws ParseError with the offending line number.
Cloud parse_cloud(std::istream& is);
Cloud read_cloud(const std::filesystem::path& path);

// Correspondence by line index. A sigma given in either file is used; if
// both give one they must agree. Missing sigmas default to 0.01.
ProblemInstance load_instance(const std::filesystem::path& model_path,
                              const std::filesystem::path& scene_path);
ProblemInstance make_instance(const Cloud& model, const Cloud& scene);

void write_cloud(std::ostream& os, const std::vector<Point3>& points,
                 const std::vector<double>& sigmas);

// Shortest round-trip decimal ("%.17g").
std::string format_real(double v);

}  // namespace dynreg
