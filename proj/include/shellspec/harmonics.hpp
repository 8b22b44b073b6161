#pragma once

#include <array>

#include "shellspec/core.hpp"

namespace shellspec {

struct SurfaceQuadrature;

inline int harmonic_count(int L) { return (L + 1) * (L + 1); }
inline int harmonic_index(int l, int m) { return l * l + l + m; }

// Real orthonormal spherical harmonics Y_{lm}, l ≤ L, at a unit vector s.
void real_harmonics(int L, const Vec3& s, double* out);

// Values and Cartesian surface gradients (unit sphere). Requires s off the poles.
void real_harmonics_grad(int L, const Vec3& s, double* val, double* gx, double* gy, double* gz);

// Harmonic basis on a Gauss–Legendre × uniform parametric grid.
struct HarmonicBasis {
  int L = 0;
  Eigen::MatrixXd Y;  // N × (L+1)²
  Eigen::MatrixXd A;  // (L+1)² × N, exact analysis for degree ≤ L
  std::array<Eigen::MatrixXd, 3> grad;  // N × (L+1)², unit-sphere surface gradient
};

// L defaults to n_polar − 1 and must satisfy 2L < n_azimuthal.
HarmonicBasis harmonic_basis(const SurfaceQuadrature& s, int L = -1);

// Angular momentum L_d = −i (s × ∇) restricted to degree l, in the real basis.
std::array<Eigen::MatrixXcd, 3> angular_momentum_block(const HarmonicBasis& hb, const Eigen::MatrixX3d& param, int l);

}  // namespace shellspec
