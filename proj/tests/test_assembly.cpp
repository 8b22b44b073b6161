#include <gtest/gtest.h>

#include <cstdio>

#include "partial_wave.hpp"
#include "shellspec/assembly.hpp"

using namespace shellspec;

namespace {

const cplx I1(0.0, 1.0);

double harmonic_error(const Eigen::MatrixXcd& S, const HarmonicBasis& hb, int lmax, double q) {
  double e = 0.0;
  for (int l = 0; l <= lmax; ++l)
    for (int m = -l; m <= l; ++m) {
      const int b = harmonic_index(l, m);
      const Eigen::VectorXcd y = hb.Y.col(b).cast<cplx>();
      const Eigen::VectorXcd r = S * y - pw::yukawa_single_layer(q, 1.0, l) * y;
      e = std::max(e, r.norm() / (pw::yukawa_single_layer(q, 1.0, l) * y.norm()));
    }
  return e;
}

}  // namespace

TEST(FunkHecke, MatchesBesselForms) {
  for (double q : {0.3, 1.0, 4.0})
    for (int l = 0; l <= 8; ++l) {
      EXPECT_NEAR(funk_hecke_single_layer(I1 * q, 1.0, l).real(), pw::yukawa_single_layer(q, 1.0, l),
                  1e-12 * pw::yukawa_single_layer(q, 1.0, l));
      EXPECT_NEAR(funk_hecke_adjoint_double_layer(I1 * q, 1.0, l).real(), pw::yukawa_adjoint_double_layer(q, 1.0, l),
                  1e-11);
    }
  // Laplace limit on a sphere of radius 2: R/(2l+1)
  for (int l = 0; l <= 4; ++l) EXPECT_NEAR(funk_hecke_single_layer(0.0, 2.0, l).real(), 2.0 / (2 * l + 1), 1e-12);
}

TEST(SingleLayer, SpectralSphereDiagonalOnHarmonics) {
  const SurfaceQuadrature s = sphere_grid(1.0, 10, 20);
  SurfaceCache sc(s);
  const BoundaryOperator S = assemble_single_layer(I1 * 0.7, sc);
  EXPECT_EQ(S.scheme, Scheme::Spectral);
  EXPECT_LT(harmonic_error(S.matrix, sc.basis(), 9, 0.7), 1e-12);
}

TEST(SingleLayer, NystromSphereConverges) {
  AssemblyOptions o;
  o.scheme = Scheme::Nystrom;
  double prev = 0.0;
  for (int n : {8, 16}) {
    const SurfaceQuadrature s = sphere_grid(1.0, n, 2 * n);
    SurfaceCache sc(s);
    const double e = harmonic_error(assemble_single_layer(I1, sc, o).matrix, sc.basis(), 3, 1.0);
    if (prev > 0.0) EXPECT_LT(e, prev / 4.0);
    prev = e;
  }
  EXPECT_LT(prev, 2e-2);
}

TEST(SingleLayer, EquivalentDiskIsCoarser) {
  const SurfaceQuadrature s = sphere_grid(1.0, 16, 32);
  SurfaceCache sc(s);
  AssemblyOptions sub, disk;
  sub.scheme = disk.scheme = Scheme::Nystrom;
  disk.diagonal = DiagonalRule::EquivalentDisk;
  const double es = harmonic_error(assemble_single_layer(I1, sc, sub).matrix, sc.basis(), 2, 1.0);
  const double ed = harmonic_error(assemble_single_layer(I1, sc, disk).matrix, sc.basis(), 2, 1.0);
  EXPECT_LT(es, ed);
  EXPECT_LT(ed, 0.1);
}

TEST(AssembleC, NystromApproachesSpectralOnSmoothDensity) {
  const PhysParams p(1.0, 1.0);
  AssemblyOptions nys;
  nys.scheme = Scheme::Nystrom;
  double prev = 1.0;
  for (int n : {8, 16}) {
    const SurfaceQuadrature s = sphere_grid(1.0, n, 2 * n);
    SurfaceCache sc(s);
    const Eigen::MatrixXcd A = assemble_C(0.25, sc, p).matrix;
    const Eigen::MatrixXcd B = assemble_C(0.25, sc, p, nys).matrix;
    Density phi(4 * s.size());
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      const Vec3 x = s.node(i);
      phi.segment<4>(4 * i) << 1.0 + x(2), x(0) * I1, x(1) * x(2), 0.5;
    }
    const Density a = A * phi, b = B * phi;
    const double e = (a - b).cwiseAbs().maxCoeff() / a.cwiseAbs().maxCoeff();
    EXPECT_LT(e, prev / 1.5);
    prev = e;
  }
  EXPECT_LT(prev, 0.1);
}

TEST(AssembleC, BirmanSchwingerIsIdentityWithoutCoupling) {
  const PhysParams p(1.0, 1.0);
  const SurfaceQuadrature s = sphere_grid(1.0, 6, 12);
  SurfaceCache sc(s);
  const BoundaryOperator B = bs_matrix(0.1, make_coupling(0.0, 0.0, 1.0), sc, p);
  EXPECT_EQ(B.kind, OpKind::BS);
  EXPECT_LT((B.matrix - Eigen::MatrixXcd::Identity(B.matrix.rows(), B.matrix.cols())).norm(), 1e-15);
}

TEST(AssembleC, RejectsEssentialSpectrum) {
  const SurfaceQuadrature s = sphere_grid(1.0, 6, 12);
  EXPECT_THROW(assemble_C(1.5, s, PhysParams(1.0, 1.0)), Error);
}

TEST(AssembleC, TruncationProjectorIsProjector) {
  const SurfaceQuadrature s = sphere_grid(1.0, 6, 12);
  SurfaceCache sc(s);
  const Eigen::MatrixXcd P = truncation_projector(sc);
  EXPECT_LT((P * P - P).norm(), 1e-10 * P.norm());
  // j = L+1/2 spinor harmonics of degree L: 2(L+1) per upper/lower pair, two copies
  const double rank_removed = double(P.rows()) - P.trace().real();
  EXPECT_NEAR(rank_removed, 4.0 * (sc.basis().L + 1), 1e-8);
}

TEST(Operator, BinaryRoundTrip) {
  const SurfaceQuadrature s = sphere_grid(1.0, 4, 8);
  const BoundaryOperator C = assemble_C(cplx(0.1, 0.2), s, PhysParams(1.0, 1.0));
  const std::string path = testing::TempDir() + "/op.bin";
  write_operator(path, C);
  const BoundaryOperator D = read_operator(path);
  EXPECT_EQ(D.kind, OpKind::C);
  EXPECT_EQ(D.lambda, C.lambda);
  EXPECT_EQ((D.matrix - C.matrix).norm(), 0.0);
  std::remove(path.c_str());
}

TEST(Potential, FarFieldMatchesDirectSum) {
  const PhysParams p(1.0, 1.0);
  const SurfaceQuadrature s = sphere_grid(1.0, 6, 12);
  SurfaceCache sc(s);
  Density phi = Density::Random(4 * s.size());
  const Vec3 x(0.0, 0.3, 4.0);
  const Vec4C v = apply_phi(0.4, sc, phi, {x}, p)[0];
  Vec4C ref = Vec4C::Zero();
  for (Eigen::Index i = 0; i < s.size(); ++i)
    ref += green_function(0.4, x - s.node(i), p) * phi.segment<4>(4 * i) * s.weights(i);
  EXPECT_LT((v - ref).norm(), 1e-13 * ref.norm());
}

TEST(Potential, NearFieldIsSmoothAcrossDistances) {
  // the interior potential of a degree-1 density is smooth up to the surface
  const PhysParams p(1.0, 1.0);
  const SurfaceQuadrature s = sphere_grid(1.0, 10, 20);
  SurfaceCache sc(s);
  Density phi(4 * s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) phi.segment<4>(4 * i) << s.node(i)(2), 0.0, 0.0, 0.0;
  const Vec3 dir = Vec3(0.3, 0.2, 0.9).normalized();
  std::vector<Vec3> pts;
  for (double r : {0.9, 0.95, 0.975}) pts.push_back(r * dir);
  const auto f = apply_phi(0.0, sc, phi, pts, p);
  // second difference of a smooth function sampled at equal-ratio radii stays small
  const double d1 = (f[1] - f[0]).norm(), d2 = (f[2] - f[1]).norm();
  EXPECT_NEAR(d2 / d1, 0.5, 0.1);
}

TEST(Potential, AdjointTraceMatchesFreeResolvent) {
  const PhysParams p(1.0, 1.0);
  const SurfaceQuadrature s = sphere_grid(1.0, 4, 8);
  const cplx lambda(0.2, 0.5);
  const Vec4C v(1.0, 0.0, 0.5, -0.5 * I1);
  const Vec3 c0(0.05, 0.0, -0.05);
  const SpinorField f = [&](const Vec3& x) -> Vec4C { return v * std::exp(-(x - c0).squaredNorm() / 0.01); };
  const VolumeQuadrature vq = box_quadrature(Vec3::Constant(-0.5), Vec3::Constant(0.5), 32);
  std::vector<Vec4C> samples;
  for (Eigen::Index q = 0; q < vq.nodes.rows(); ++q) samples.push_back(f(vq.nodes.row(q).transpose()));
  const Density a = apply_phi_star(lambda, s, vq, samples, p);
  std::vector<Vec3> nodes;
  for (Eigen::Index i = 0; i < s.size(); ++i) nodes.push_back(s.node(i));
  BallRule ball;
  ball.radius = 1.6;
  ball.radial_panels = 16;
  ball.polar = 48;
  ball.azimuthal = 96;
  const auto b = free_resolvent(std::conj(lambda), f, nodes, p, ball);
  double e = 0.0, m = 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    e = std::max(e, (a.segment<4>(4 * i) - b[size_t(i)]).norm());
    m = std::max(m, b[size_t(i)].norm());
  }
  EXPECT_LT(e / m, 1e-4);
}

TEST(Mesh, IcosahedralSingleLayerMean) {
  // l = 0 eigenvalue from the mean of S·1 on a fine triangulated sphere
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  Eigen::MatrixX3d V(12, 3);
  V << -1, t, 0, 1, t, 0, -1, -t, 0, 1, -t, 0, 0, -1, t, 0, 1, t, 0, -1, -t, 0, 1, -t, t, 0, -1, t, 0, 1, -t, 0, -1,
      -t, 0, 1;
  for (int i = 0; i < 12; ++i) V.row(i).normalize();
  Eigen::MatrixX3i F(20, 3);
  F << 0, 11, 5, 0, 5, 1, 0, 1, 7, 0, 7, 10, 0, 10, 11, 1, 5, 9, 5, 11, 4, 11, 10, 2, 10, 7, 6, 7, 1, 8, 3, 9, 4, 3, 4,
      2, 3, 2, 6, 3, 6, 8, 3, 8, 9, 4, 9, 5, 2, 4, 11, 6, 2, 10, 8, 6, 7, 9, 8, 1;
  const SurfaceQuadrature s = mesh_from_faces(V, F);
  const Eigen::MatrixXcd S = assemble_single_layer(I1, s).matrix;
  const cplx mean = (S * Eigen::VectorXcd::Ones(s.size())).mean();
  EXPECT_NEAR(mean.real(), pw::yukawa_single_layer(1.0, 1.0, 0), 0.1);
}
