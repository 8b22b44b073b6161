#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "shellspec/spectral.hpp"

namespace shellspec {

using json = nlohmann::ordered_json;

struct SurfaceSpec {
  std::string kind = "sphere";  // sphere | spheroid | mesh
  double radius = 1.0;
  double a = 1.0;
  double b = 1.0;
  int n_polar = 12;
  int n_azimuthal = 24;
  std::string path;
};

struct RunConfig {
  std::string task;
  PhysParams physics;
  Coupling coupling;
  SurfaceSpec surface;
  int n_samples = 200;
  std::optional<double> margin;
  std::optional<double> tol_lambda;
  std::optional<double> accept_tol;
  double bracket_threshold = 0.25;
  AssemblyOptions assembly;
  std::vector<double> c_list{5.0, 10.0, 20.0, 40.0};
  bool nonrel_upper = true;
  int nonrel_samples = 400;
  std::string verify_level = "quick";
};

RunConfig parse_config(const json& j);
RunConfig load_config(const std::string& path);
json config_to_json(const RunConfig& c);

SurfaceQuadrature build_surface(const SurfaceSpec& s);
ScanOptions scan_options(const RunConfig& c, int threads);
RefineOptions refine_options(const RunConfig& c);

std::string fmt17(double v);

void write_scan_csv(const std::string& path, const GapScan& g, const json& echo);
json brackets_json(const GapScan& g, const json& echo);
json eigenvalues_json(const std::vector<EigenResult>& ev, const std::vector<double>& residuals, const json& echo);
void write_densities(const std::string& path, const std::vector<EigenResult>& ev, const json& echo);
json symmetry_json(const SymmetryReport& r, const json& echo);
void write_nonrel_csv(const std::string& path, const NonrelTable& t, const json& echo);
json nonrel_json(const NonrelTable& t, const json& echo);

void write_json(const std::string& path, const json& j);

}  // namespace shellspec
