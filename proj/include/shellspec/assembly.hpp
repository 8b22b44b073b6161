#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "shellspec/core.hpp"
#include "shellspec/harmonics.hpp"
#include "shellspec/surface.hpp"

namespace shellspec {

enum class Scheme { Auto, Spectral, Nystrom };
enum class DiagonalRule { Subtraction, EquivalentDisk };
enum class OpKind : std::uint8_t { C = 0, SingleLayer = 1, BS = 2 };

const char* scheme_name(Scheme s);

struct AssemblyOptions {
  Scheme scheme = Scheme::Auto;
  DiagonalRule diagonal = DiagonalRule::Subtraction;
};

// Spectral is used for sphere grids that resolve harmonics up to n_polar − 1.
Scheme resolve_scheme(const SurfaceQuadrature& s, const AssemblyOptions& o);

struct BoundaryOperator {
  Eigen::MatrixXcd matrix;
  cplx lambda = 0.0;
  OpKind kind = OpKind::C;
  Scheme scheme = Scheme::Nystrom;
  Coupling coupling;
  Eigen::Index nodes = 0;
};

using Density = Eigen::VectorXcd;  // 4N, node-major

// Cached per-surface data: harmonic basis, spin–orbit truncation vectors, static self integrals.
class SurfaceCache {
public:
  explicit SurfaceCache(const SurfaceQuadrature& s);
  const SurfaceQuadrature& surface() const { return s_; }
  const HarmonicBasis& basis() const;
  const StaticSelfIntegrals& self_integrals() const;
  // Columns span the j = L+1/2 spinor harmonics of top degree L (4N × r) and the
  // matching analysis rows (r × 4N).
  const Eigen::MatrixXcd& truncation_synthesis() const;
  const Eigen::MatrixXcd& truncation_analysis() const;

private:
  const SurfaceQuadrature& s_;
  mutable std::unique_ptr<HarmonicBasis> hb_;
  mutable std::unique_ptr<StaticSelfIntegrals> si_;
  mutable Eigen::MatrixXcd zs_, za_;
};

// Sphere eigenvalues of the single layer and of the adjoint double layer,
// by Funk–Hecke quadrature of the kernels.
cplx funk_hecke_single_layer(cplx k, double R, int l);
cplx funk_hecke_adjoint_double_layer(cplx k, double R, int l);

BoundaryOperator assemble_C(cplx lambda, const SurfaceCache& sc, const PhysParams& p, const AssemblyOptions& o = {});
BoundaryOperator assemble_C(cplx lambda, const SurfaceQuadrature& s, const PhysParams& p, const AssemblyOptions& o = {});

BoundaryOperator assemble_single_layer(cplx k, const SurfaceCache& sc, const AssemblyOptions& o = {});
BoundaryOperator assemble_single_layer(cplx k, const SurfaceQuadrature& s, const AssemblyOptions& o = {});

BoundaryOperator bs_matrix(cplx lambda, const Coupling& cp, const SurfaceCache& sc, const PhysParams& p,
                           const AssemblyOptions& o = {});
BoundaryOperator bs_matrix(cplx lambda, const Coupling& cp, const SurfaceQuadrature& s, const PhysParams& p,
                           const AssemblyOptions& o = {});
// I + (η+τβ)·C for an already assembled C.
BoundaryOperator bs_from_C(const BoundaryOperator& C, const Coupling& cp);

// Dense projector I − Z·Zᵃ used by the spectral sphere scheme (identity otherwise).
Eigen::MatrixXcd truncation_projector(const SurfaceCache& sc, const AssemblyOptions& o = {});

// Spinor block (i, j) of a 4N × 4N operator.
inline auto block4(const Eigen::MatrixXcd& M, Eigen::Index i, Eigen::Index j) {
  return M.block<4, 4>(4 * i, 4 * j);
}
inline auto block4(Eigen::MatrixXcd& M, Eigen::Index i, Eigen::Index j) { return M.block<4, 4>(4 * i, 4 * j); }

struct PhiOptions {
  double near_factor = 5.0;  // plain quadrature beyond near_factor·h
  int panel_points = 8;
  int max_depth = 10;  // mesh panel subdivision depth
};

std::vector<Vec4C> apply_phi(cplx lambda, const SurfaceCache& sc, const Density& phi, const std::vector<Vec3>& points,
                             const PhysParams& p, const PhiOptions& o = {});

struct VolumeQuadrature {
  Eigen::MatrixX3d nodes;
  Eigen::VectorXd weights;
};

// Σ_k G_{λ̄}(x_i − y_k) f(y_k) w_k at every surface node.
Density apply_phi_star(cplx lambda, const SurfaceQuadrature& s, const VolumeQuadrature& vq,
                       const std::vector<Vec4C>& samples, const PhysParams& p);

using SpinorField = std::function<Vec4C(const Vec3&)>;

struct BallRule {
  double radius = 6.0;  // integration radius around the evaluation point
  int radial_panels = 6;
  int radial_points = 8;
  int polar = 16;
  int azimuthal = 32;
};

// ((A₀ − λ)^{-1} f)(x) = ∫ G_λ(x − y) f(y) dy by a ball rule centred at x.
std::vector<Vec4C> free_resolvent(cplx lambda, const SpinorField& f, const std::vector<Vec3>& points,
                                  const PhysParams& p, const BallRule& rule = {});

// Tensor-product Gauss rule on a box.
VolumeQuadrature box_quadrature(const Vec3& lo, const Vec3& hi, int n_per_axis);

void write_operator(const std::string& path, const BoundaryOperator& op);
BoundaryOperator read_operator(const std::string& path);

}  // namespace shellspec
