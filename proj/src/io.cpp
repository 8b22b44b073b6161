#include "shellspec/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <cstdio>
#include <fstream>
#include <limits>

namespace shellspec {

namespace {

double finite_or_throw(const json& j, const char* key) {
  if (!j.is_number()) throw Error(ErrorKind::ConfigError, std::string("field '") + key + "' must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw Error(ErrorKind::ConfigError, std::string("field '") + key + "' must be finite");
  return v;
}

double num(const json& obj, const char* key, double def) {
  if (!obj.contains(key)) return def;
  return finite_or_throw(obj.at(key), key);
}

int integer(const json& obj, const char* key, int def) {
  if (!obj.contains(key)) return def;
  if (!obj.at(key).is_number_integer()) throw Error(ErrorKind::ConfigError, std::string("field '") + key + "' must be an integer");
  return obj.at(key).get<int>();
}

}  // namespace

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

RunConfig parse_config(const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::ConfigError, "config must be a JSON object");
  RunConfig c;
  if (j.contains("task")) c.task = j.at("task").get<std::string>();
  const json phys = j.value("physics", json::object());
  c.physics = PhysParams(num(phys, "m", 1.0), num(phys, "c", 1.0));
  const json cp = j.value("coupling", json::object());
  c.coupling = make_coupling(num(cp, "eta", 0.0), num(cp, "tau", 0.0), c.physics.c);
  const json s = j.value("surface", json::object());
  c.surface.kind = s.value("kind", std::string("sphere"));
  c.surface.radius = num(s, "radius", 1.0);
  c.surface.a = num(s, "a", 1.0);
  c.surface.b = num(s, "b", 1.0);
  c.surface.n_polar = integer(s, "n_polar", 12);
  c.surface.n_azimuthal = integer(s, "n_azimuthal", 2 * c.surface.n_polar);
  c.surface.path = s.value("path", std::string());
  if (c.surface.kind != "sphere" && c.surface.kind != "spheroid" && c.surface.kind != "mesh")
    throw Error(ErrorKind::ConfigError, "surface.kind must be sphere, spheroid or mesh");
  if (c.surface.kind == "mesh" && c.surface.path.empty()) throw Error(ErrorKind::ConfigError, "mesh surface needs a path");
  if (c.surface.n_polar > 64 || c.surface.n_azimuthal > 128)
    throw Error(ErrorKind::ConfigError, "resolution beyond the supported dense-matrix size");
  const json sc = j.value("scan", json::object());
  c.n_samples = integer(sc, "n_samples", 200);
  if (sc.contains("margin")) c.margin = num(sc, "margin", 0.0);
  if (sc.contains("tol_lambda")) c.tol_lambda = num(sc, "tol_lambda", 0.0);
  if (sc.contains("accept_tol")) c.accept_tol = num(sc, "accept_tol", 0.0);
  c.bracket_threshold = num(sc, "bracket_threshold", 0.25);
  const std::string scheme = sc.value("scheme", std::string("auto"));
  if (scheme == "auto") c.assembly.scheme = Scheme::Auto;
  else if (scheme == "spectral") c.assembly.scheme = Scheme::Spectral;
  else if (scheme == "nystrom") c.assembly.scheme = Scheme::Nystrom;
  else throw Error(ErrorKind::ConfigError, "scan.scheme must be auto, spectral or nystrom");
  const std::string diag = sc.value("diagonal", std::string("subtraction"));
  if (diag == "subtraction") c.assembly.diagonal = DiagonalRule::Subtraction;
  else if (diag == "equivalent_disk") c.assembly.diagonal = DiagonalRule::EquivalentDisk;
  else throw Error(ErrorKind::ConfigError, "scan.diagonal must be subtraction or equivalent_disk");
  if (c.n_samples < 3) throw Error(ErrorKind::ConfigError, "scan.n_samples must be at least 3");
  const json nr = j.value("nonrel", json::object());
  if (nr.contains("c_list")) {
    c.c_list.clear();
    for (const auto& v : nr.at("c_list")) c.c_list.push_back(finite_or_throw(v, "c_list"));
  }
  c.nonrel_upper = nr.value("upper", true);
  c.nonrel_samples = integer(nr, "n_samples", 400);
  const json vf = j.value("verify", json::object());
  c.verify_level = vf.value("level", std::string("quick"));
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ConfigError, "cannot open config " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ConfigError, std::string("invalid JSON: ") + e.what());
  }
  try {
    return parse_config(j);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ConfigError, e.what());
  }
}

json config_to_json(const RunConfig& c) {
  json j;
  j["task"] = c.task;
  j["physics"] = {{"m", c.physics.m}, {"c", c.physics.c}};
  j["coupling"] = {{"eta", c.coupling.eta},
                   {"tau", c.coupling.tau},
                   {"class", coupling_class_name(c.coupling.cls)}};
  json s = {{"kind", c.surface.kind}};
  if (c.surface.kind == "sphere") s["radius"] = c.surface.radius;
  if (c.surface.kind == "spheroid") {
    s["a"] = c.surface.a;
    s["b"] = c.surface.b;
  }
  if (c.surface.kind == "mesh") s["path"] = c.surface.path;
  else {
    s["n_polar"] = c.surface.n_polar;
    s["n_azimuthal"] = c.surface.n_azimuthal;
  }
  j["surface"] = s;
  const double mc2 = c.physics.rest_energy();
  json sc = {{"n_samples", c.n_samples},
             {"margin", c.margin.value_or(1e-3 * mc2)},
             {"tol_lambda", c.tol_lambda.value_or(1e-6 * mc2)},
             {"bracket_threshold", c.bracket_threshold},
             {"scheme", c.assembly.scheme == Scheme::Auto       ? "auto"
                        : c.assembly.scheme == Scheme::Spectral ? "spectral"
                                                                : "nystrom"},
             {"diagonal", c.assembly.diagonal == DiagonalRule::Subtraction ? "subtraction" : "equivalent_disk"}};
  if (c.accept_tol) sc["accept_tol"] = *c.accept_tol;
  j["scan"] = sc;
  j["nonrel"] = {{"c_list", c.c_list}, {"upper", c.nonrel_upper}, {"n_samples", c.nonrel_samples}};
  return j;
}

SurfaceQuadrature build_surface(const SurfaceSpec& s) {
  if (s.kind == "sphere") return sphere_grid(s.radius, s.n_polar, s.n_azimuthal);
  if (s.kind == "spheroid") return spheroid_grid(s.a, s.b, s.n_polar, s.n_azimuthal);
  return load_triangle_mesh(s.path);
}

ScanOptions scan_options(const RunConfig& c, int threads) {
  ScanOptions o;
  o.n_samples = c.n_samples;
  o.margin = c.margin.value_or(-1.0);
  o.bracket_threshold = c.bracket_threshold;
  o.threads = threads;
  o.assembly = c.assembly;
  return o;
}

RefineOptions refine_options(const RunConfig& c) {
  RefineOptions o;
  o.tol_lambda = c.tol_lambda.value_or(-1.0);
  o.accept_tol = c.accept_tol.value_or(-1.0);
  o.assembly = c.assembly;
  return o;
}

void write_scan_csv(const std::string& path, const GapScan& g, const json& echo) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorKind::ConfigError, "cannot write " + path);
  os << "# config: " << echo.dump() << "\n";
  os << "lambda,sigma_min\n";
  for (size_t i = 0; i < g.lambda.size(); ++i) os << fmt17(g.lambda[i]) << "," << fmt17(g.sigma_min[i]) << "\n";
}

json brackets_json(const GapScan& g, const json& echo) {
  json j;
  j["config"] = echo;
  j["brackets"] = json::array();
  for (const Bracket& b : g.brackets)
    j["brackets"].push_back({{"lo", b.lo}, {"hi", b.hi}, {"lambda", b.sample_lambda}, {"sigma_min", b.sample_sigma}});
  j["runs"] = json::array();
  for (const auto& r : g.runs) j["runs"].push_back({{"lo", r.first}, {"hi", r.second}});
  return j;
}

json eigenvalues_json(const std::vector<EigenResult>& ev, const std::vector<double>& residuals, const json& echo) {
  json j;
  j["config"] = echo;
  j["eigenvalues"] = json::array();
  for (size_t i = 0; i < ev.size(); ++i) {
    const EigenResult& r = ev[i];
    json e = {{"lambda", r.lambda},
              {"multiplicity", r.multiplicity},
              {"even_multiplicity", r.multiplicity % 2 == 0},
              {"sigma_min", r.sigma_min},
              {"bs_residual", r.bs_residual},
              {"accept_tol", r.accept_tol}};
    if (i < residuals.size()) e["jump_residual"] = residuals[i];
    std::vector<double> sv(r.singular_values.data(), r.singular_values.data() + r.singular_values.size());
    e["smallest_singular_values"] = sv;
    j["eigenvalues"].push_back(e);
  }
  return j;
}

void write_densities(const std::string& path, const std::vector<EigenResult>& ev, const json& echo) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorKind::ConfigError, "cannot write " + path);
  const std::string hdr = echo.dump();
  auto u32 = [&](std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    os.write(reinterpret_cast<const char*>(b), 4);
  };
  auto f64 = [&](double v) {
    std::uint64_t u;
    std::memcpy(&u, &v, 8);
    unsigned char b[8];
    for (int k = 0; k < 8; ++k) b[k] = static_cast<unsigned char>(u >> (8 * k));
    os.write(reinterpret_cast<const char*>(b), 8);
  };
  os.write("SHSD", 4);
  u32(std::uint32_t(hdr.size()));
  os.write(hdr.data(), std::streamsize(hdr.size()));
  std::uint32_t count = 0, dim = 0;
  for (const EigenResult& r : ev) {
    count += std::uint32_t(r.densities.size());
    if (!r.densities.empty()) dim = std::uint32_t(r.densities.front().size());
  }
  u32(count);
  u32(dim);
  for (const EigenResult& r : ev)
    for (const Density& d : r.densities) {
      f64(r.lambda);
      for (Eigen::Index i = 0; i < d.size(); ++i) {
        f64(d(i).real());
        f64(d(i).imag());
      }
    }
}

json symmetry_json(const SymmetryReport& r, const json& echo) {
  json j;
  j["config"] = echo;
  j["base"] = {{"eta", r.base.eta}, {"tau", r.base.tau}};
  j["base_eigenvalues"] = r.base_eigenvalues;
  j["base_multiplicities"] = r.base_multiplicities;
  j["tolerance"] = r.tol;
  j["checks"] = json::array();
  for (const SymmetryCheck& c : r.checks) {
    json pairs = json::array();
    std::vector<double> a = c.reference, b = c.compared;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    for (size_t i = 0; i < std::min(a.size(), b.size()); ++i) pairs.push_back({a[i], b[i]});
    j["checks"].push_back({{"name", c.name},
                           {"coupling", {{"eta", c.coupling.eta}, {"tau", c.coupling.tau}}},
                           {"matched_pairs", pairs},
                           {"count_reference", a.size()},
                           {"count_compared", b.size()},
                           {"max_mismatch", std::isfinite(c.max_mismatch) ? json(c.max_mismatch) : json("inf")},
                           {"matched", c.matched}});
  }
  j["all_matched"] = r.all_matched;
  j["all_even_multiplicity"] = r.all_even;
  return j;
}

void write_nonrel_csv(const std::string& path, const NonrelTable& t, const json& echo) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorKind::ConfigError, "cannot write " + path);
  os << "# config: " << echo.dump() << "\n";
  os << "c,lambda_shifted,schrodinger_ref,difference\n";
  for (const NonrelRow& r : t.rows) {
    if (!r.error.empty()) {
      os << fmt17(r.c) << ",nan,nan,nan\n";
      continue;
    }
    os << fmt17(r.c) << "," << fmt17(r.lambda_shifted) << "," << fmt17(r.schrodinger_ref) << ","
       << fmt17(r.difference) << "\n";
  }
  os << "# fitted_order: " << fmt17(t.fitted_order) << "\n";
}

json nonrel_json(const NonrelTable& t, const json& echo) {
  json j;
  j["config"] = echo;
  j["upper_branch"] = t.upper;
  j["schrodinger_levels"] = json::array();
  for (const RadialMode& r : t.schrodinger)
    j["schrodinger_levels"].push_back({{"l", r.l}, {"energy", r.energy}, {"residual", r.residual}});
  j["rows"] = json::array();
  for (const NonrelRow& r : t.rows) {
    json row = {{"c", r.c}};
    if (r.error.empty()) {
      row["lambda_shifted"] = r.lambda_shifted;
      row["schrodinger_ref"] = r.schrodinger_ref;
      row["difference"] = r.difference;
      row["all_shifted"] = r.all_shifted;
    } else {
      row["error"] = r.error;
    }
    j["rows"].push_back(row);
  }
  j["fitted_order"] = t.fitted_order;
  j["monotone"] = t.monotone;
  return j;
}

void write_json(const std::string& path, const json& j) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorKind::ConfigError, "cannot write " + path);
  os << j.dump(2) << "\n";
}

}  // namespace shellspec
