#include <gtest/gtest.h>

#include "partial_wave.hpp"
#include "shellspec/linalg.hpp"
#include "shellspec/spectral.hpp"

using namespace shellspec;

namespace {

const PhysParams unit(1.0, 1.0);

struct Fixture {
  SurfaceQuadrature s = sphere_grid(1.0, 8, 16);
  SurfaceCache sc{s};
};

Fixture& fixture() {
  static Fixture f;
  return f;
}

void expect_partial_wave(double eta, double tau) {
  const auto ev = find_eigenvalues(make_coupling(eta, tau, 1.0), fixture().sc, unit);
  const auto ref = pw::levels(eta, tau);
  ASSERT_EQ(ev.size(), ref.size()) << "(" << eta << "," << tau << ")";
  for (size_t i = 0; i < ev.size(); ++i) {
    EXPECT_NEAR(ev[i].lambda, ref[i].lambda, 2e-6) << "kappa " << ref[i].kappa;
    EXPECT_EQ(ev[i].multiplicity, ref[i].multiplicity) << "kappa " << ref[i].kappa;
    EXPECT_EQ(ev[i].densities.size(), size_t(ev[i].multiplicity));
    EXPECT_LT(ev[i].bs_residual, ev[i].accept_tol);
  }
}

}  // namespace

TEST(SmallestSvd, AgreesWithDenseSvd) {
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Random(150, 150);
  M.col(3) = M.col(7) * 0.5 + M.col(9) + 1e-7 * Eigen::VectorXcd::Random(150);  // nearly rank deficient
  const SmallSVD r = smallest_svd(M, 3);
  const Eigen::VectorXd ref = Eigen::JacobiSVD<Eigen::MatrixXcd>(M).singularValues().reverse().head(3);
  EXPECT_NEAR(r.values(0), ref(0), 1e-6 * ref(0));
  EXPECT_NEAR(r.values(1), ref(1), 1e-6 * ref(1));
  EXPECT_NEAR(r.values(2), ref(2), 1e-6 * ref(2));
  EXPECT_NEAR((M * r.right.col(0)).norm(), ref(0), 1e-6 * ref(0));
}

TEST(GoldenSection, FindsMinimum) {
  const auto r = golden_minimize([](double x) { return (x - 0.3) * (x - 0.3) + 1.0; }, -1.0, 2.0, 1e-10);
  EXPECT_NEAR(r.x, 0.3, 1e-7);
  EXPECT_NEAR(r.f, 1.0, 1e-15);
}

TEST(Scan, FreeCaseIsIdentity) {
  ScanOptions o;
  o.n_samples = 20;
  const GapScan g = scan_gap(make_coupling(0.0, 0.0, 1.0), fixture().sc, unit, o);
  ASSERT_EQ(g.sigma_min.size(), 20u);
  for (double s : g.sigma_min) EXPECT_NEAR(s, 1.0, 1e-13);
  EXPECT_TRUE(g.brackets.empty());
}

TEST(Scan, CriticalCouplingRejected) {
  try {
    scan_gap(make_coupling(2.0, 0.0, 1.0), fixture().sc, unit);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::CriticalCoupling);
    EXPECT_NE(std::string(e.what()).find("critical"), std::string::npos);
  }
}

TEST(Scan, SubWindowAndThreads) {
  ScanOptions o;
  o.n_samples = 30;
  o.lo = -0.9;
  o.hi = -0.7;
  o.threads = 2;
  const GapScan g = scan_gap(make_coupling(-3.0, 0.0, 1.0), fixture().sc, unit, o);
  EXPECT_DOUBLE_EQ(g.lambda.front(), -0.9);
  EXPECT_DOUBLE_EQ(g.lambda.back(), -0.7);
  ASSERT_EQ(g.brackets.size(), 1u);
  EXPECT_LT(g.brackets[0].lo, -0.7862113423);
  EXPECT_GT(g.brackets[0].hi, -0.7862113423);
}

TEST(Eigenvalues, ElectrostaticAttractive) { expect_partial_wave(-3.0, 0.0); }
TEST(Eigenvalues, ElectrostaticWeak) { expect_partial_wave(-1.0, 0.0); }
TEST(Eigenvalues, ScalarNegative) { expect_partial_wave(0.0, -3.0); }
TEST(Eigenvalues, MixedCoupling) { expect_partial_wave(2.0, 1.0); }

TEST(Eigenvalues, SmallCouplingEmpty) {
  EXPECT_TRUE(find_eigenvalues(make_coupling(-0.05, 0.05, 1.0), fixture().sc, unit).empty());
}

TEST(Eigenvalues, DensitiesSatisfyCouplingCondition) {
  const Coupling cp = make_coupling(-3.0, 0.0, 1.0);
  ScanOptions so;
  so.lo = -0.8;
  so.hi = -0.77;
  so.n_samples = 20;
  const auto ev = find_eigenvalues(cp, fixture().sc, unit, so);
  ASSERT_EQ(ev.size(), 1u);
  const JumpResidual r =
      coupling_condition_residual(ev[0].lambda, cp, fixture().sc, ev[0].densities[0], unit, {0.1, 0.05, 0.025}, 3);
  EXPECT_LT(r.extrapolated, 2e-2);
  EXPECT_LT(r.relative.back(), r.relative.front());
}

TEST(Symmetry, Report) {
  ScanOptions so;
  so.n_samples = 150;
  const SymmetryReport r = verify_symmetries(make_coupling(-3.0, 0.0, 1.0), fixture().sc, unit, so);
  EXPECT_TRUE(r.all_matched);
  EXPECT_TRUE(r.all_even);
  EXPECT_EQ(r.base_eigenvalues.size(), 3u);
  EXPECT_GE(r.checks.size(), 2u);
}

TEST(Symmetry, SetMismatch) {
  EXPECT_NEAR(set_mismatch({1.0, 2.0}, {2.0 + 1e-3, 1.0}), 1e-3, 1e-15);
  EXPECT_TRUE(std::isinf(set_mismatch({1.0}, {})));
}

TEST(Positivity, ScalarShellOnSphere) {
  const PositivityReport r = scalar_positive_tau_check(1.0, fixture().sc, unit);
  EXPECT_TRUE(r.empty);
}

TEST(Nonrel, MixedCouplingRejected) {
  try {
    nonrel_limit_sweep(-1.0, 0.5, fixture().sc, 1.0, {5.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MixedCoupling);
  }
}

TEST(Nonrel, DifferencesShrink) {
  const NonrelTable t = nonrel_limit_sweep(-3.0, 0.0, fixture().sc, 1.0, {5.0, 10.0});
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_TRUE(t.rows[0].error.empty()) << t.rows[0].error;
  EXPECT_NEAR(t.rows[0].schrodinger_ref, -4.477380336224413, 1e-9);
  EXPECT_TRUE(t.monotone);
  EXPECT_GT(t.fitted_order, 0.8);
}

TEST(Nonrel, FittedOrderOfPowerLaw) {
  EXPECT_NEAR(fitted_order({1.0, 2.0, 4.0}, {3.0, 0.75, 0.1875}), 2.0, 1e-12);
}

TEST(Resolvent, RequiresNonrealLambda) {
  const SpinorField f = [](const Vec3&) { return Vec4C::Zero().eval(); };
  EXPECT_THROW(apply_resolvent(0.3, make_coupling(-1.0, 0.0, 1.0), fixture().sc, unit, f, {Vec3::Zero()}), Error);
  EXPECT_THROW(apply_resolvent(cplx(0.3, 0.4), make_coupling(-2.0, 0.0, 1.0), fixture().sc, unit, f, {Vec3::Zero()}),
               Error);
}
