#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

namespace shellspec {

using cplx = std::complex<double>;
using Vec3 = Eigen::Vector3d;

template <typename T> using Mat4 = Eigen::Matrix<T, 4, 4>;
template <typename T> using Vec4 = Eigen::Matrix<T, 4, 1>;
using Mat4C = Mat4<cplx>;
using Vec4C = Vec4<cplx>;

enum class ErrorKind {
  EssentialSpectrumPoint,
  OriginSingularity,
  ConfinementCase,
  NotConfinement,
  DegenerateCoupling,
  BadResolution,
  ParseError,
  OpenSurface,
  InconsistentOrientation,
  PointOnSurface,
  VolumeNodeOnSurface,
  CriticalCoupling,
  RealLambda,
  NoEigenvalueInBracket,
  NoEigenvalue,
  MixedCoupling,
  ConfigError,
};

const char* error_name(ErrorKind k);

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_name(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

struct PhysParams {
  double m = 1.0;
  double c = 1.0;
  PhysParams() = default;
  PhysParams(double m_, double c_);
  double rest_energy() const { return m * c * c; }
};

enum class CouplingClass { Noncritical, Critical, Confinement };

const char* coupling_class_name(CouplingClass k);

struct Coupling {
  double eta = 0.0;
  double tau = 0.0;
  CouplingClass cls = CouplingClass::Noncritical;
};

// Classifies with the band |η²−τ² ∓ 4c²| ≤ 1e−9·4c².
Coupling make_coupling(double eta, double tau, double c);
CouplingClass classify(double eta, double tau, double c);

enum class Region { Gap, NonReal, Essential };

const char* region_name(Region r);
Region region_of(cplx lambda, const PhysParams& p);

struct DiracMatrices {
  std::array<Mat4C, 3> alpha;
  Mat4C beta;
};

const DiracMatrices& dirac_matrices();

template <typename T> Mat4<T> identity4() { return Mat4<T>::Identity(); }

template <typename Derived>
Mat4C alpha_dot(const Eigen::MatrixBase<Derived>& v) {
  const auto& d = dirac_matrices();
  return d.alpha[0] * cplx(v(0)) + d.alpha[1] * cplx(v(1)) + d.alpha[2] * cplx(v(2));
}

// Mat4C with α·v for complex vectors (used for Σ_d α_d ⊗ D_d style sums).
Mat4C alpha_dot_c(const Eigen::Vector3cd& v);

cplx momentum_k(cplx lambda, const PhysParams& p);

Mat4C green_function(cplx lambda, const Vec3& x, const PhysParams& p);
// Same kernel when k is already known; skips the region check.
Mat4C green_function_k(cplx lambda, cplx k, const Vec3& x, const PhysParams& p);

std::pair<Mat4C, Mat4C> green_split(cplx lambda, const Vec3& x, const PhysParams& p);

Mat4C transmission_matrix(const Coupling& cp, const Vec3& nu, double c);
// (ic α·ν + ½(η+τβ))^{-1} in closed form.
Mat4C transmission_inverse_factor(const Coupling& cp, const Vec3& nu, double c);

std::pair<Mat4C, Mat4C> confinement_projectors(const Coupling& cp, const Vec3& nu, double c);

Coupling symmetry_map(const Coupling& cp, double c);

struct HalfLines {
  double lower_end;  // (−∞, lower_end]
  double upper_start;  // [upper_start, ∞)
};

HalfLines essential_spectrum(const PhysParams& p);

// ηI₄ + τβ
Mat4C coupling_matrix(const Coupling& cp);

// Charge conjugation U = iβα₂; U conj(ψ) maps solutions at λ to solutions at −λ.
Mat4C charge_conjugation();

}  // namespace shellspec
