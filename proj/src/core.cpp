#include "shellspec/core.hpp"

#include <cmath>

namespace shellspec {

namespace {

constexpr double kPi = 3.14159265358979323846;
const cplx I1(0.0, 1.0);

// (e^{z} − 1) without cancellation for small |z|.
cplx expm1c(cplx z) {
  if (std::abs(z) < 1e-2) {
    cplx term = z, sum = z;
    for (int n = 2; n < 12; ++n) {
      term *= z / double(n);
      sum += term;
    }
    return sum;
  }
  return std::exp(z) - 1.0;
}

// (1 − z) e^{z} − 1 for z = ikr, small-argument safe.
cplx one_minus_z_exp_minus_one(cplx z) {
  if (std::abs(z) < 1e-2) {
    // Σ_{n≥2} z^n (1/n! − 1/(n−1)!) = Σ z^n (1−n)/n!
    cplx term = z, sum = 0.0;
    for (int n = 2; n < 14; ++n) {
      term *= z / double(n);
      sum += term * double(1 - n);
    }
    return sum;
  }
  return (1.0 - z) * std::exp(z) - 1.0;
}

}  // namespace

const char* error_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::EssentialSpectrumPoint: return "EssentialSpectrumPoint";
    case ErrorKind::OriginSingularity: return "OriginSingularity";
    case ErrorKind::ConfinementCase: return "ConfinementCase";
    case ErrorKind::NotConfinement: return "NotConfinement";
    case ErrorKind::DegenerateCoupling: return "DegenerateCoupling";
    case ErrorKind::BadResolution: return "BadResolution";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::OpenSurface: return "OpenSurface";
    case ErrorKind::InconsistentOrientation: return "InconsistentOrientation";
    case ErrorKind::PointOnSurface: return "PointOnSurface";
    case ErrorKind::VolumeNodeOnSurface: return "VolumeNodeOnSurface";
    case ErrorKind::CriticalCoupling: return "CriticalCoupling";
    case ErrorKind::RealLambda: return "RealLambda";
    case ErrorKind::NoEigenvalueInBracket: return "NoEigenvalueInBracket";
    case ErrorKind::NoEigenvalue: return "NoEigenvalue";
    case ErrorKind::MixedCoupling: return "MixedCoupling";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

PhysParams::PhysParams(double m_, double c_) : m(m_), c(c_) {
  if (!(m > 0.0) || !(c > 0.0)) throw Error(ErrorKind::ConfigError, "m and c must be positive");
}

const char* coupling_class_name(CouplingClass k) {
  switch (k) {
    case CouplingClass::Noncritical: return "Noncritical";
    case CouplingClass::Critical: return "Critical";
    case CouplingClass::Confinement: return "Confinement";
  }
  return "Unknown";
}

CouplingClass classify(double eta, double tau, double c) {
  const double d = eta * eta - tau * tau;
  const double band = 1e-9 * 4.0 * c * c;
  if (std::abs(d - 4.0 * c * c) <= band) return CouplingClass::Critical;
  if (std::abs(d + 4.0 * c * c) <= band) return CouplingClass::Confinement;
  return CouplingClass::Noncritical;
}

Coupling make_coupling(double eta, double tau, double c) {
  return Coupling{eta, tau, classify(eta, tau, c)};
}

const char* region_name(Region r) {
  switch (r) {
    case Region::Gap: return "Gap";
    case Region::NonReal: return "NonReal";
    case Region::Essential: return "Essential";
  }
  return "Unknown";
}

Region region_of(cplx lambda, const PhysParams& p) {
  if (lambda.imag() != 0.0) return Region::NonReal;
  return std::abs(lambda.real()) < p.rest_energy() ? Region::Gap : Region::Essential;
}

const DiracMatrices& dirac_matrices() {
  static const DiracMatrices d = [] {
    DiracMatrices r;
    Eigen::Matrix2cd s1, s2, s3, id2 = Eigen::Matrix2cd::Identity();
    s1 << 0, 1, 1, 0;
    s2 << 0, -I1, I1, 0;
    s3 << 1, 0, 0, -1;
    const Eigen::Matrix2cd sig[3] = {s1, s2, s3};
    for (int j = 0; j < 3; ++j) {
      r.alpha[j].setZero();
      r.alpha[j].block<2, 2>(0, 2) = sig[j];
      r.alpha[j].block<2, 2>(2, 0) = sig[j];
    }
    r.beta.setZero();
    r.beta.block<2, 2>(0, 0) = id2;
    r.beta.block<2, 2>(2, 2) = -id2;
    return r;
  }();
  return d;
}

Mat4C alpha_dot_c(const Eigen::Vector3cd& v) {
  const auto& d = dirac_matrices();
  return d.alpha[0] * v(0) + d.alpha[1] * v(1) + d.alpha[2] * v(2);
}

cplx momentum_k(cplx lambda, const PhysParams& p) {
  const double mc = p.m * p.c;
  if (lambda.imag() == 0.0) {
    const double l = lambda.real();
    if (std::abs(l) >= p.rest_energy())
      throw Error(ErrorKind::EssentialSpectrumPoint, "lambda lies on the essential spectrum");
    const double lc = l / p.c;
    return cplx(0.0, std::sqrt((mc - lc) * (mc + lc)));
  }
  cplx k = std::sqrt(lambda * lambda / (p.c * p.c) - mc * mc);
  if (k.imag() < 0.0) k = -k;
  return k;
}

Mat4C green_function_k(cplx lambda, cplx k, const Vec3& x, const PhysParams& p) {
  const double r = x.norm();
  if (r == 0.0) throw Error(ErrorKind::OriginSingularity, "green function at x = 0");
  const auto& d = dirac_matrices();
  const cplx e = std::exp(I1 * k * r) / (4.0 * kPi * r);
  const cplx a = (1.0 - I1 * k * r) * I1 / (p.c * r * r);
  Mat4C g = d.beta * cplx(p.m);
  g.diagonal().array() += lambda / (p.c * p.c);
  g += a * alpha_dot(x);
  return g * e;
}

Mat4C green_function(cplx lambda, const Vec3& x, const PhysParams& p) {
  return green_function_k(lambda, momentum_k(lambda, p), x, p);
}

std::pair<Mat4C, Mat4C> green_split(cplx lambda, const Vec3& x, const PhysParams& p) {
  const double r = x.norm();
  if (r == 0.0) throw Error(ErrorKind::OriginSingularity, "green function at x = 0");
  const cplx k = momentum_k(lambda, p);
  const auto& d = dirac_matrices();
  Mat4C mm = d.beta * cplx(p.m);
  mm.diagonal().array() += lambda / (p.c * p.c);
  const Mat4C ax = alpha_dot(x);
  const double f = 1.0 / (4.0 * kPi * r);
  Mat4C singular = mm * f + ax * (I1 / (4.0 * kPi * p.c * r * r * r));
  const cplx z = I1 * k * r;
  Mat4C remainder = mm * (expm1c(z) * f) + ax * (I1 * one_minus_z_exp_minus_one(z) / (4.0 * kPi * p.c * r * r * r));
  return {singular, remainder};
}

Mat4C coupling_matrix(const Coupling& cp) {
  Mat4C v = dirac_matrices().beta * cplx(cp.tau);
  v.diagonal().array() += cp.eta;
  return v;
}

Mat4C transmission_matrix(const Coupling& cp, const Vec3& nu, double c) {
  if (classify(cp.eta, cp.tau, c) == CouplingClass::Confinement)
    throw Error(ErrorKind::ConfinementCase, "eta^2 - tau^2 = -4c^2");
  const Mat4C an = alpha_dot(nu);
  const Mat4C half = coupling_matrix(cp) * 0.5;
  const Mat4C plus = I1 * c * an + half;
  const Mat4C minus = -I1 * c * an + half;
  return -(plus.inverse() * minus);
}

Mat4C transmission_inverse_factor(const Coupling& cp, const Vec3& nu, double c) {
  const double den = 4.0 * c * c + cp.eta * cp.eta - cp.tau * cp.tau;
  if (den == 0.0) throw Error(ErrorKind::ConfinementCase, "eta^2 - tau^2 = -4c^2");
  Mat4C m = -I1 * c * alpha_dot(nu) - 0.5 * cp.tau * dirac_matrices().beta;
  m.diagonal().array() += 0.5 * cp.eta;
  return m * (4.0 / den);
}

std::pair<Mat4C, Mat4C> confinement_projectors(const Coupling& cp, const Vec3& nu, double c) {
  if (classify(cp.eta, cp.tau, c) != CouplingClass::Confinement)
    throw Error(ErrorKind::NotConfinement, "eta^2 - tau^2 != -4c^2");
  const Mat4C t = (I1 / (2.0 * c)) * alpha_dot(nu) * coupling_matrix(cp);
  const Mat4C id = Mat4C::Identity();
  return {0.5 * (id - t), 0.5 * (id + t)};
}

Coupling symmetry_map(const Coupling& cp, double c) {
  const double d = cp.eta * cp.eta - cp.tau * cp.tau;
  const double scale = std::max(cp.eta * cp.eta, cp.tau * cp.tau);
  if (scale == 0.0 || std::abs(d) <= 1e-14 * scale)
    throw Error(ErrorKind::DegenerateCoupling, "eta^2 == tau^2");
  const double f = -4.0 * c * c / d;
  return make_coupling(f * cp.eta, f * cp.tau, c);
}

HalfLines essential_spectrum(const PhysParams& p) {
  return {-p.rest_energy(), p.rest_energy()};
}

Mat4C charge_conjugation() {
  const auto& d = dirac_matrices();
  return I1 * d.beta * d.alpha[1];
}

}  // namespace shellspec
