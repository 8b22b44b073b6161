#pragma once

#include <string>
#include <vector>

#include "shellspec/core.hpp"

namespace shellspec {

enum class SurfaceKind { SphereGrid, SpheroidGrid, TriangleMesh };

const char* surface_kind_name(SurfaceKind k);

struct SurfaceQuadrature {
  SurfaceKind kind = SurfaceKind::SphereGrid;
  Eigen::MatrixX3d nodes;
  Eigen::MatrixX3d normals;
  Eigen::VectorXd weights;
  double h = 0.0;

  // Parametric grids: y = diag(a, a, b)·s for s on the unit sphere.
  double a = 0.0;
  double b = 0.0;
  int n_polar = 0;
  int n_azimuthal = 0;
  Eigen::MatrixX3d param;
  Eigen::VectorXd polar_t;  // Gauss–Legendre nodes in cos θ
  Eigen::VectorXd polar_w;

  Eigen::MatrixX3d vertices;
  Eigen::MatrixX3i faces;

  Eigen::Index size() const { return nodes.rows(); }
  Vec3 node(Eigen::Index i) const { return nodes.row(i).transpose(); }
  Vec3 normal(Eigen::Index i) const { return normals.row(i).transpose(); }
  bool parametric() const { return kind != SurfaceKind::TriangleMesh; }
  double area() const { return weights.sum(); }

  Vec3 map(const Vec3& s) const { return Vec3(a * s(0), a * s(1), b * s(2)); }
  Vec3 normal_at(const Vec3& s) const;
  // dσ(y) = area_factor(s)·dS(s) for the unit-sphere measure dS.
  double area_factor(const Vec3& s) const;
};

SurfaceQuadrature sphere_grid(double R, int n_polar, int n_azimuthal);
SurfaceQuadrature spheroid_grid(double a, double b, int n_polar, int n_azimuthal);

SurfaceQuadrature load_triangle_mesh(const std::string& path);
SurfaceQuadrature parse_off(const std::string& text);
SurfaceQuadrature mesh_from_faces(const Eigen::MatrixX3d& vertices, const Eigen::MatrixX3i& faces);

struct ProbePair {
  Vec3 inner;
  Vec3 outer;
  Eigen::Index node;
  double eps;
};

std::vector<ProbePair> probe_pairs(const SurfaceQuadrature& s, const std::vector<double>& eps_list);

// I_i = ∫ 1/(4π|x_i−y|) dσ(y) and J_i = p.v.∫ (x_i−y)/(4π|x_i−y|³) dσ(y).
// Parametric grids: whole surface. Meshes: own panel only.
struct StaticSelfIntegrals {
  Eigen::VectorXd I;
  Eigen::MatrixX3d J;
};

StaticSelfIntegrals static_self_integrals(const SurfaceQuadrature& s);

// Orthonormal frame (e1, e2, n) with n given.
void tangent_frame(const Vec3& n, Vec3& e1, Vec3& e2);

// Closest parameter point on a parametric surface to x.
Vec3 closest_param(const SurfaceQuadrature& s, const Vec3& x);

}  // namespace shellspec
