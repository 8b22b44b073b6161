#include <gtest/gtest.h>

#include <random>

#include "shellspec/core.hpp"

using namespace shellspec;

namespace {

const cplx I1(0.0, 1.0);

Vec3 random_unit(std::mt19937_64& g) {
  std::normal_distribution<double> n;
  return Vec3(n(g), n(g), n(g)).normalized();
}

// Independent kernel: (λ/c² + mβ + (1 − ikr)(i/(c r²)) α·x) e^{ikr}/(4πr).
Mat4C green_reference(cplx lambda, const Vec3& x, double m, double c) {
  const auto& d = dirac_matrices();
  cplx k = std::sqrt(lambda * lambda / (c * c * c * c) * (c * c) - m * m * c * c);
  if (k.imag() < 0) k = -k;
  const double r = x.norm();
  Mat4C ax = d.alpha[0] * x(0) + d.alpha[1] * x(1) + d.alpha[2] * x(2);
  Mat4C g = lambda / (c * c) * Mat4C::Identity() + m * d.beta + (1.0 - I1 * k * r) * (I1 / (c * r * r)) * ax;
  return g * (std::exp(I1 * k * r) / (4.0 * M_PI * r));
}

}  // namespace

TEST(Dirac, Anticommutation) {
  const auto& d = dirac_matrices();
  for (int j = 0; j < 3; ++j) {
    EXPECT_LT((d.alpha[j] * d.beta + d.beta * d.alpha[j]).norm(), 1e-15);
    for (int k = 0; k < 3; ++k) {
      const Mat4C a = d.alpha[j] * d.alpha[k] + d.alpha[k] * d.alpha[j];
      EXPECT_LT((a - (j == k ? 2.0 : 0.0) * Mat4C::Identity()).norm(), 1e-15);
    }
  }
}

TEST(Coupling, Classification) {
  EXPECT_EQ(classify(2.0, 0.0, 1.0), CouplingClass::Critical);
  EXPECT_EQ(classify(0.0, 2.0, 1.0), CouplingClass::Confinement);
  EXPECT_EQ(classify(-3.0, 0.0, 1.0), CouplingClass::Noncritical);
  EXPECT_EQ(classify(2.0 + 1e-10, 0.0, 1.0), CouplingClass::Critical);
  EXPECT_EQ(classify(2.001, 0.0, 1.0), CouplingClass::Noncritical);
}

TEST(Coupling, SymmetryMapIsInvolution) {
  const Coupling a = make_coupling(-3.0, 0.0, 1.0);
  const Coupling b = symmetry_map(a, 1.0);
  EXPECT_NEAR(b.eta, 4.0 / 3.0, 1e-14);
  EXPECT_NEAR(b.tau, 0.0, 1e-14);
  const Coupling c = symmetry_map(make_coupling(2.0, 1.0, 1.5), 1.5);
  const Coupling back = symmetry_map(c, 1.5);
  EXPECT_NEAR(back.eta, 2.0, 1e-13);
  EXPECT_NEAR(back.tau, 1.0, 1e-13);
  EXPECT_THROW(symmetry_map(make_coupling(1.0, 1.0, 1.0), 1.0), Error);
}

TEST(Transmission, InverseAndUnitarityStructure) {
  std::mt19937_64 g(3);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int t = 0; t < 100; ++t) {
    const double c = 0.3 + std::abs(u(g));
    const Coupling cp = make_coupling(u(g), u(g), c);
    if (cp.cls != CouplingClass::Noncritical) continue;
    const Vec3 nu = random_unit(g);
    const Mat4C V = coupling_matrix(cp);
    const Mat4C plus = I1 * c * alpha_dot(nu) + 0.5 * V;
    EXPECT_LT((plus * transmission_inverse_factor(cp, nu, c) - Mat4C::Identity()).norm(), 1e-12);
    const Mat4C R = transmission_matrix(cp, nu, c);
    EXPECT_LT((plus * R + (-I1 * c * alpha_dot(nu) + 0.5 * V)).norm(), 1e-12 * plus.norm() * R.norm());
  }
  EXPECT_THROW(transmission_matrix(make_coupling(0.0, 2.0, 1.0), Vec3::UnitZ(), 1.0), Error);
}

TEST(Transmission, ConfinementProjectors) {
  const Coupling cp = make_coupling(1.0, std::sqrt(5.0), 1.0);
  const auto [p, q] = confinement_projectors(cp, Vec3(0.6, 0.0, 0.8), 1.0);
  EXPECT_LT((p * p - p).norm(), 1e-13);
  EXPECT_LT((q * q - q).norm(), 1e-13);
  EXPECT_LT((p + q - Mat4C::Identity()).norm(), 1e-13);
  EXPECT_NEAR(p.trace().real(), 2.0, 1e-13);
  EXPECT_THROW(confinement_projectors(make_coupling(-3.0, 0.0, 1.0), Vec3::UnitZ(), 1.0), Error);
}

TEST(Green, MatchesClosedForm) {
  std::mt19937_64 g(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int t = 0; t < 200; ++t) {
    const double m = 0.5 + std::abs(u(g)), c = 0.5 + std::abs(u(g));
    const cplx lambda(u(g), 0.1 + std::abs(u(g)));
    const Vec3 x(u(g), u(g), u(g));
    const Mat4C a = green_function(lambda, x, PhysParams(m, c));
    const Mat4C b = green_reference(lambda, x, m, c);
    EXPECT_LT((a - b).norm(), 1e-12 * b.norm());
  }
}

TEST(Green, SplitSumsToKernel) {
  const PhysParams p(1.0, 1.0);
  for (double r : {1e-6, 1e-3, 0.1, 2.0}) {
    const Vec3 x = r * Vec3(0.48, 0.6, 0.64);
    const auto [s, rem] = green_split(cplx(0.4, 0.0), x, p);
    const Mat4C g = green_function(0.4, x, p);
    EXPECT_LT((s + rem - g).norm(), 1e-13 * g.norm());
  }
}

TEST(Green, DecaysInTheGap) {
  const PhysParams p(1.0, 1.0);
  const cplx k = momentum_k(0.6, p);
  EXPECT_NEAR(k.real(), 0.0, 1e-15);
  EXPECT_NEAR(k.imag(), 0.8, 1e-14);
  EXPECT_THROW(green_function(0.3, Vec3::Zero(), p), Error);
  EXPECT_THROW(momentum_k(1.5, p), Error);
  EXPECT_EQ(region_of(cplx(0.2, 0.0), p), Region::Gap);
  EXPECT_EQ(region_of(cplx(1.2, 0.0), p), Region::Essential);
  EXPECT_EQ(region_of(cplx(1.2, 0.1), p), Region::NonReal);
}

TEST(Green, ChargeConjugationMapsLambdaToMinusLambda) {
  // U conj(G_λ(x)) U^{-1} = −G_{−λ̄}(x) for the free kernel
  const PhysParams p(1.0, 1.0);
  const Mat4C U = charge_conjugation();
  const Vec3 x(0.3, -0.2, 0.5);
  const cplx lambda(0.35, 0.2);
  const Mat4C lhs = U * green_function(lambda, x, p).conjugate() * U.inverse();
  const Mat4C rhs = -green_function(-std::conj(lambda), x, p);
  EXPECT_LT((lhs - rhs).norm(), 1e-12 * rhs.norm());
}

TEST(Spectrum, EssentialHalfLines) {
  const HalfLines h = essential_spectrum(PhysParams(2.0, 3.0));
  EXPECT_DOUBLE_EQ(h.lower_end, -18.0);
  EXPECT_DOUBLE_EQ(h.upper_start, 18.0);
}
