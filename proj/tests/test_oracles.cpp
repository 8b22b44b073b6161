#include <gtest/gtest.h>

#include <cmath>

#include "partial_wave.hpp"
#include "shellspec/oracles.hpp"

using namespace shellspec;

namespace {

const cplx I1(0.0, 1.0);

// Root of the l = 0 and l = 1 matching conditions written with elementary functions.
double delta_shell_energy(int l, double eta, double m, double R) {
  auto F = [&](double q) {
    const double x = q * R;
    double lin, lout;
    if (l == 0) {
      lin = q / std::tanh(x);
      lout = -q;
    } else {
      // r·i_1(qr) ∝ cosh − sinh/x, r·k_1(qr) ∝ e^{−x}(1 + 1/x)
      const double u = std::cosh(x) - std::sinh(x) / x;
      const double du = q * (std::sinh(x) - std::cosh(x) / x + std::sinh(x) / (x * x));
      lin = du / u;
      lout = q * (-1.0 - 1.0 / (x * x) / (1.0 + 1.0 / x));
    }
    return lout - lin - 2.0 * m * eta;
  };
  double a = 1e-3, b = 50.0;
  for (int i = 0; i < 200; ++i) {
    const double c = 0.5 * (a + b);
    ((F(c) < 0.0) == (F(a) < 0.0) ? a : b) = c;
  }
  const double q = 0.5 * (a + b);
  return -q * q / (2.0 * m);
}

}  // namespace

TEST(Bessel, RealArgumentAgainstStd) {
  for (double x : {0.01, 0.3, 1.0, 2.5, 7.0, 20.0})
    for (int l = 0; l <= 8; ++l) {
      const BesselPair b = spherical_bessel(l, x);
      const double j = std::sph_bessel(unsigned(l), x), y = std::sph_neumann(unsigned(l), x);
      EXPECT_NEAR(b.j.real(), j, 1e-13 * std::max(1.0, std::abs(j)));
      EXPECT_NEAR(b.j.imag(), 0.0, 1e-15);
      // h_l = j_l + i y_l, measured relative to |h_l|
      EXPECT_LT(std::abs(b.h - std::complex<double>(j, y)), 1e-12 * std::max(1.0, std::hypot(j, y)));
    }
}

TEST(Bessel, ImaginaryArgumentAgainstModified) {
  // j_l(ix) = i^l i_l(x), h_l(ix) = −i^{−l} k_l(x)
  for (double x : {0.05, 0.5, 1.0, 3.0, 10.0})
    for (int l = 0; l <= 6; ++l) {
      const double il = std::sqrt(M_PI / (2.0 * x)) * std::cyl_bessel_i(l + 0.5, x);
      const double kl = std::sqrt(2.0 / (M_PI * x)) * std::cyl_bessel_k(l + 0.5, x);
      const BesselPair b = spherical_bessel(l, I1 * x);
      const cplx il_l = std::pow(I1, l);
      EXPECT_LT(std::abs(b.j - il_l * il), 1e-12 * il);
      EXPECT_LT(std::abs(b.h + kl / il_l), 1e-12 * kl);
    }
}

TEST(Bessel, OriginHandling) {
  EXPECT_THROW(spherical_bessel(0, 0.0), Error);
  std::vector<cplx> j, h;
  spherical_bessel_all(3, 0.0, j, h);
  EXPECT_EQ(j[0], 1.0);
  EXPECT_EQ(j[2], 0.0);
  EXPECT_TRUE(h.empty());
}

TEST(SingleLayerEig, MatchesModifiedBesselProduct) {
  for (double q : {0.2, 1.0, 5.0})
    for (int l = 0; l <= 6; ++l)
      EXPECT_NEAR(sphere_single_layer_eig(I1 * q, 1.3, l).real(), pw::yukawa_single_layer(q, 1.3, l),
                  1e-12 * pw::yukawa_single_layer(q, 1.3, l));
  EXPECT_NEAR(sphere_single_layer_eig(0.0, 1.3, 2).real(), 1.3 / 5.0, 1e-15);
}

TEST(Schrodinger, ShootingMatchesElementaryRoots) {
  for (double eta : {-2.0, -3.0, -5.0}) {
    const auto modes = schrodinger_sphere_bound_states(eta, 1.0, 1.0, 1);
    ASSERT_GE(modes.size(), 2u);
    for (const RadialMode& r : modes) EXPECT_NEAR(r.energy, delta_shell_energy(r.l, eta, 1.0, 1.0), 1e-9);
  }
  const auto m3 = schrodinger_sphere_bound_states(-3.0, 1.0, 1.0, 4);
  ASSERT_EQ(m3.size(), 3u);
  EXPECT_NEAR(m3[0].energy, -4.477380336224413, 1e-9);
  EXPECT_NEAR(m3[1].energy, -3.3370067354754136, 1e-9);
  EXPECT_NEAR(m3[2].energy, -1.2884598488245445, 1e-9);
}

TEST(Schrodinger, RepulsiveShellHasNoBoundStates) {
  EXPECT_TRUE(schrodinger_sphere_bound_states(2.0, 1.0, 1.0, 3).empty());
  // 2m|η|R ≤ 1 binds nothing in l = 0
  EXPECT_TRUE(schrodinger_sphere_bound_states(-0.45, 1.0, 1.0, 0).empty());
}

TEST(Schrodinger, BoundaryIntegralZerosMatchShooting) {
  const SurfaceQuadrature s = sphere_grid(1.0, 8, 16);
  SurfaceCache sc(s);
  const auto zeros = schrodinger_bs_zeros(-3.0, sc, 1.0, -6.0, -0.05, 120, 1e-11);
  ASSERT_EQ(zeros.size(), 3u);
  EXPECT_NEAR(zeros[0].energy, -4.477380336224413, 1e-6);
  EXPECT_EQ(zeros[0].multiplicity, 1);
  EXPECT_EQ(zeros[1].multiplicity, 3);
  EXPECT_EQ(zeros[2].multiplicity, 5);
}

TEST(Schrodinger, KernelIsScaledSingleLayer) {
  const SurfaceQuadrature s = sphere_grid(1.0, 6, 12);
  SurfaceCache sc(s);
  const BoundaryOperator D = schrodinger_kernels(-0.5, 2.0, sc);
  const BoundaryOperator S = assemble_single_layer(I1 * std::sqrt(2.0), sc);
  EXPECT_LT((D.matrix - 4.0 * S.matrix).norm(), 1e-13 * D.matrix.norm());
  EXPECT_NEAR(schrodinger_k(-0.5, 2.0).imag(), std::sqrt(2.0), 1e-15);
}
