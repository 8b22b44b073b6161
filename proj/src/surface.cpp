#include "shellspec/surface.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "shellspec/quadrature.hpp"

namespace shellspec {

namespace {

constexpr double kPi = 3.14159265358979323846;

SurfaceQuadrature parametric_grid(double a, double b, int n_polar, int n_az, SurfaceKind kind) {
  if (!(a > 0.0) || !(b > 0.0)) throw Error(ErrorKind::BadResolution, "semi-axes must be positive");
  if (n_polar < 4 || n_az < 8) throw Error(ErrorKind::BadResolution, "need n_polar >= 4 and n_azimuthal >= 8");
  SurfaceQuadrature s;
  s.kind = kind;
  s.a = a;
  s.b = b;
  s.n_polar = n_polar;
  s.n_azimuthal = n_az;
  Rule1D gl = gauss_legendre(n_polar);
  s.polar_t = gl.x;
  s.polar_w = gl.w;
  const Eigen::Index n = Eigen::Index(n_polar) * n_az;
  s.nodes.resize(n, 3);
  s.normals.resize(n, 3);
  s.param.resize(n, 3);
  s.weights.resize(n);
  const double dphi = 2.0 * kPi / n_az;
  for (int i = 0; i < n_polar; ++i) {
    const double t = gl.x(i), st = std::sqrt(1.0 - t * t);
    for (int j = 0; j < n_az; ++j) {
      const Eigen::Index q = Eigen::Index(i) * n_az + j;
      const Vec3 u(st * std::cos(j * dphi), st * std::sin(j * dphi), t);
      s.param.row(q) = u;
      s.nodes.row(q) = s.map(u);
      s.normals.row(q) = s.normal_at(u);
      s.weights(q) = gl.w(i) * dphi * s.area_factor(u);
    }
  }
  s.h = std::sqrt(s.area() / double(n));
  return s;
}

double polygon_area(const Vec3& p0, const Vec3& p1, const Vec3& p2) {
  return 0.5 * (p1 - p0).cross(p2 - p0).norm();
}

}  // namespace

const char* surface_kind_name(SurfaceKind k) {
  switch (k) {
    case SurfaceKind::SphereGrid: return "SphereGrid";
    case SurfaceKind::SpheroidGrid: return "SpheroidGrid";
    case SurfaceKind::TriangleMesh: return "TriangleMesh";
  }
  return "Unknown";
}

Vec3 SurfaceQuadrature::normal_at(const Vec3& s) const {
  return Vec3(s(0) / a, s(1) / a, s(2) / b).normalized();
}

double SurfaceQuadrature::area_factor(const Vec3& s) const {
  return a * a * b * Vec3(s(0) / a, s(1) / a, s(2) / b).norm();
}

SurfaceQuadrature sphere_grid(double R, int n_polar, int n_azimuthal) {
  return parametric_grid(R, R, n_polar, n_azimuthal, SurfaceKind::SphereGrid);
}

SurfaceQuadrature spheroid_grid(double a, double b, int n_polar, int n_azimuthal) {
  return parametric_grid(a, b, n_polar, n_azimuthal, SurfaceKind::SpheroidGrid);
}

SurfaceQuadrature mesh_from_faces(const Eigen::MatrixX3d& vertices, const Eigen::MatrixX3i& faces_in) {
  Eigen::MatrixX3i faces = faces_in;
  const Eigen::Index nf = faces.rows();
  if (nf == 0) throw Error(ErrorKind::ParseError, "mesh has no faces");
  for (Eigen::Index f = 0; f < nf; ++f)
    for (int k = 0; k < 3; ++k)
      if (faces(f, k) < 0 || faces(f, k) >= vertices.rows())
        throw Error(ErrorKind::ParseError, "face index out of range");

  std::map<std::pair<int, int>, int> directed;
  for (Eigen::Index f = 0; f < nf; ++f)
    for (int k = 0; k < 3; ++k) ++directed[{faces(f, k), faces(f, (k + 1) % 3)}];
  for (const auto& [e, cnt] : directed) {
    const auto rev = directed.find({e.second, e.first});
    const int rc = rev == directed.end() ? 0 : rev->second;
    if (cnt + rc != 2) {
      if (cnt + rc < 2) throw Error(ErrorKind::OpenSurface, "boundary edge detected");
      throw Error(ErrorKind::InconsistentOrientation, "non-manifold edge");
    }
    if (cnt != 1) throw Error(ErrorKind::InconsistentOrientation, "neighbouring faces disagree on orientation");
  }

  double vol = 0.0;
  for (Eigen::Index f = 0; f < nf; ++f) {
    const Vec3 p0 = vertices.row(faces(f, 0)), p1 = vertices.row(faces(f, 1)), p2 = vertices.row(faces(f, 2));
    vol += p0.dot(p1.cross(p2)) / 6.0;
  }
  if (vol < 0.0) faces.col(1).swap(faces.col(2));

  SurfaceQuadrature s;
  s.kind = SurfaceKind::TriangleMesh;
  s.vertices = vertices;
  s.faces = faces;
  s.nodes.resize(nf, 3);
  s.normals.resize(nf, 3);
  s.weights.resize(nf);
  for (Eigen::Index f = 0; f < nf; ++f) {
    const Vec3 p0 = vertices.row(faces(f, 0)), p1 = vertices.row(faces(f, 1)), p2 = vertices.row(faces(f, 2));
    const Vec3 cr = (p1 - p0).cross(p2 - p0);
    if (cr.norm() == 0.0) throw Error(ErrorKind::ParseError, "degenerate face");
    s.nodes.row(f) = (p0 + p1 + p2) / 3.0;
    s.normals.row(f) = cr.normalized();
    s.weights(f) = 0.5 * cr.norm();
  }
  s.h = std::sqrt(s.area() / double(nf));
  return s;
}

SurfaceQuadrature parse_off(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) tokens.push_back(tok);
  }
  size_t pos = 0;
  auto next_long = [&]() -> long {
    if (pos >= tokens.size()) throw Error(ErrorKind::ParseError, "unexpected end of OFF data");
    try {
      size_t used = 0;
      const long v = std::stol(tokens[pos], &used);
      if (used != tokens[pos].size()) throw Error(ErrorKind::ParseError, "bad integer '" + tokens[pos] + "'");
      ++pos;
      return v;
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::ParseError, "bad integer '" + tokens[pos] + "'");
    }
  };
  auto next_double = [&]() -> double {
    if (pos >= tokens.size()) throw Error(ErrorKind::ParseError, "unexpected end of OFF data");
    try {
      size_t used = 0;
      const double v = std::stod(tokens[pos], &used);
      if (used != tokens[pos].size()) throw Error(ErrorKind::ParseError, "bad number '" + tokens[pos] + "'");
      ++pos;
      return v;
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::ParseError, "bad number '" + tokens[pos] + "'");
    }
  };
  if (tokens.empty() || tokens[0] != "OFF") throw Error(ErrorKind::ParseError, "missing OFF header");
  pos = 1;
  const long nv = next_long(), nf = next_long();
  next_long();
  if (nv <= 0 || nf <= 0) throw Error(ErrorKind::ParseError, "bad vertex/face counts");
  Eigen::MatrixX3d v(nv, 3);
  for (long i = 0; i < nv; ++i)
    for (int k = 0; k < 3; ++k) v(i, k) = next_double();
  Eigen::MatrixX3i f(nf, 3);
  for (long i = 0; i < nf; ++i) {
    if (next_long() != 3) throw Error(ErrorKind::ParseError, "only triangular faces are supported");
    for (int k = 0; k < 3; ++k) f(i, k) = int(next_long());
  }
  if (pos != tokens.size()) throw Error(ErrorKind::ParseError, "trailing data after faces");
  return mesh_from_faces(v, f);
}

SurfaceQuadrature load_triangle_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open mesh file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_off(ss.str());
}

std::vector<ProbePair> probe_pairs(const SurfaceQuadrature& s, const std::vector<double>& eps_list) {
  std::vector<ProbePair> out;
  out.reserve(eps_list.size() * size_t(s.size()));
  for (double eps : eps_list)
    for (Eigen::Index i = 0; i < s.size(); ++i)
      out.push_back({s.node(i) - eps * s.normal(i), s.node(i) + eps * s.normal(i), i, eps});
  return out;
}

void tangent_frame(const Vec3& n, Vec3& e1, Vec3& e2) {
  const Vec3 t = std::abs(n(0)) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  e1 = (t - t.dot(n) * n).normalized();
  e2 = n.cross(e1);
}

Vec3 closest_param(const SurfaceQuadrature& s, const Vec3& x) {
  Vec3 u(x(0) / s.a, x(1) / s.a, x(2) / s.b);
  if (u.norm() == 0.0) return Vec3::UnitZ();
  u.normalize();
  if (s.a == s.b) return u;
  for (int it = 0; it < 50; ++it) {
    Vec3 e1, e2;
    tangent_frame(u, e1, e2);
    Eigen::Matrix<double, 3, 2> J;
    J.col(0) = s.map(e1);
    J.col(1) = s.map(e2);
    const Vec3 r = s.map(u) - x;
    const Eigen::Vector2d d = (J.transpose() * J).ldlt().solve(-J.transpose() * r);
    u = (u + d(0) * e1 + d(1) * e2).normalized();
    if (d.norm() < 1e-14) break;
  }
  return u;
}

StaticSelfIntegrals static_self_integrals(const SurfaceQuadrature& s) {
  const Eigen::Index n = s.size();
  StaticSelfIntegrals out{Eigen::VectorXd(n), Eigen::MatrixX3d(n, 3)};
  if (s.parametric()) {
    const int nth = 48, nph = 48;
    const Rule1D g = gauss_legendre(nth, 0.0, kPi);
    const double dph = 2.0 * kPi / nph;
    for (Eigen::Index i = 0; i < n; ++i) {
      const Vec3 s0 = s.param.row(i), x = s.node(i);
      Vec3 e1, e2;
      tangent_frame(s0, e1, e2);
      double I = 0.0;
      Vec3 J = Vec3::Zero();
      for (int a = 0; a < nth; ++a) {
        const double ct = std::cos(g.x(a)), st = std::sin(g.x(a));
        double Ia = 0.0;
        Vec3 Ja = Vec3::Zero();
        for (int b = 0; b < nph; ++b) {
          const double ph = (b + 0.5) * dph;
          const Vec3 u = ct * s0 + st * (std::cos(ph) * e1 + std::sin(ph) * e2);
          const Vec3 d = x - s.map(u);
          const double r = d.norm(), af = s.area_factor(u);
          Ia += af / r;
          Ja += d * (af / (r * r * r));
        }
        I += Ia * st * g.w(a);
        J += Ja * st * g.w(a);
      }
      out.I(i) = I * dph / (4.0 * kPi);
      out.J.row(i) = J * dph / (4.0 * kPi);
    }
    return out;
  }
  const Rule1D g = gauss_legendre(24);
  for (Eigen::Index f = 0; f < n; ++f) {
    const Vec3 x = s.node(f);
    double I = 0.0;
    Vec3 J = Vec3::Zero();
    for (int k = 0; k < 3; ++k) {
      const Vec3 p = s.vertices.row(s.faces(f, k)), q = s.vertices.row(s.faces(f, (k + 1) % 3));
      const Vec3 t = (q - p).normalized();
      const Vec3 foot = p + (x - p).dot(t) * t;
      const double d = (foot - x).norm();
      const Vec3 nd = (foot - x) / d;
      const double s1 = (p - foot).dot(t), s2 = (q - foot).dot(t);
      I += d * (std::asinh(s2 / d) - std::asinh(s1 / d));
      const double p1 = std::atan(s1 / d), p2 = std::atan(s2 / d);
      for (int a = 0; a < g.x.size(); ++a) {
        const double psi = 0.5 * (p1 + p2) + 0.5 * (p2 - p1) * g.x(a);
        const double wt = 0.5 * (p2 - p1) * g.w(a);
        const Vec3 e = std::cos(psi) * nd + std::sin(psi) * t;
        J -= e * (std::log(d / std::cos(psi)) * wt);
      }
    }
    out.I(f) = I / (4.0 * kPi);
    out.J.row(f) = J / (4.0 * kPi);
  }
  return out;
}

}  // namespace shellspec
