#include "shellspec/verify.hpp"

#include <cmath>
#include <random>

#include "shellspec/spectral.hpp"

namespace shellspec {

namespace {

const cplx I1(0.0, 1.0);

Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  return Vec3(n(rng), n(rng), n(rng)).normalized();
}

}  // namespace

double anticommutation_defect(const DiracMatrices& d) {
  double e = 0.0;
  const Mat4C id = Mat4C::Identity();
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < 3; ++k) {
      const Mat4C a = d.alpha[j] * d.alpha[k] + d.alpha[k] * d.alpha[j] - (j == k ? 2.0 : 0.0) * id;
      e = std::max(e, a.cwiseAbs().maxCoeff());
    }
    e = std::max(e, (d.alpha[j] * d.beta + d.beta * d.alpha[j]).cwiseAbs().maxCoeff());
  }
  return std::max(e, (d.beta * d.beta - id).cwiseAbs().maxCoeff());
}

std::vector<CheckResult> run_verify(const std::string& level, const DiracMatrices& d) {
  std::vector<CheckResult> out;
  auto add = [&](const std::string& name, double m, double tol) { out.push_back({name, m, tol, m <= tol}); };
  std::mt19937_64 rng(20261016);
  std::uniform_real_distribution<double> u(-3.0, 3.0);

  add("dirac_anticommutation", anticommutation_defect(d), 1e-12);

  {
    double e = 0.0;
    for (int t = 0; t < 100; ++t) {
      const double c = 0.5 + std::abs(u(rng));
      const Coupling cp = make_coupling(u(rng), u(rng), c);
      if (cp.cls == CouplingClass::Confinement) continue;
      const Vec3 nu = random_unit(rng);
      const Mat4C plus = I1 * c * alpha_dot(nu) + 0.5 * coupling_matrix(cp);
      const Mat4C inv = transmission_inverse_factor(cp, nu, c);
      e = std::max(e, (plus * inv - Mat4C::Identity()).cwiseAbs().maxCoeff());
    }
    add("transmission_inverse_closed_form", e, 1e-12);
  }

  {
    double e = 0.0;
    for (double c : {0.5, 1.0, 3.0}) {
      const Coupling cp = make_coupling(1.0, std::sqrt(1.0 + 4.0 * c * c), c);
      const Vec3 nu = random_unit(rng);
      const auto [pp, pm] = confinement_projectors(cp, nu, c);
      e = std::max({e, (pp * pp - pp).cwiseAbs().maxCoeff(), (pm * pm - pm).cwiseAbs().maxCoeff(),
                    (pp + pm - Mat4C::Identity()).cwiseAbs().maxCoeff(), (pp * pm).cwiseAbs().maxCoeff()});
    }
    add("confinement_projectors", e, 1e-12);
  }

  {
    double e = 0.0;
    for (double c : {1.0, 2.0}) {
      const Vec3 nu = random_unit(rng);
      const auto [pp, pm] = confinement_projectors(make_coupling(0.0, 2.0 * c, c), nu, c);
      const Mat4C mit = 0.5 * (Mat4C::Identity() + I1 * d.beta * alpha_dot(nu));
      e = std::max(e, (pp - mit).cwiseAbs().maxCoeff());
    }
    add("mit_bag_projector", e, 1e-12);
  }

  {
    double e1 = 0.0, e2 = 0.0;
    for (int t = 0; t < 1000; ++t) {
      const PhysParams p(0.5 + std::abs(u(rng)), 0.5 + std::abs(u(rng)));
      const cplx lambda(u(rng), u(rng));
      const Vec3 x(u(rng), u(rng), u(rng));
      const Mat4C g = green_function(lambda, x, p);
      const Mat4C gb = green_function(std::conj(lambda), -x, p);
      e1 = std::max(e1, (g.adjoint() - gb).norm() / g.norm());
      const cplx k = momentum_k(lambda, p);
      const double r = x.norm();
      Mat4C rhs = 2.0 * (lambda / (p.c * p.c) * d.beta + p.m * Mat4C::Identity()) * (std::exp(I1 * k * r) / (4.0 * M_PI * r));
      e2 = std::max(e2, (d.beta * g + g * d.beta - rhs).norm() / g.norm());
    }
    add("green_adjoint_symmetry", e1, 1e-12);
    add("green_anticommutator", e2, 1e-12);
  }

  {
    const PhysParams p(1.0, 1.0);
    const SurfaceQuadrature s = spheroid_grid(1.0, 1.3, 6, 12);
    SurfaceCache sc(s);
    const cplx lambda(0.3, 0.1);
    const BoundaryOperator C = assemble_C(lambda, sc, p);
    const BoundaryOperator S = assemble_single_layer(momentum_k(lambda, p), sc);
    Eigen::MatrixXcd B(C.matrix.rows(), C.matrix.cols());
    Eigen::MatrixXcd lhs(C.matrix.rows(), C.matrix.cols());
    const Mat4C m2 = 2.0 * (lambda / (p.c * p.c) * d.beta + p.m * Mat4C::Identity());
    for (Eigen::Index i = 0; i < s.size(); ++i)
      for (Eigen::Index j = 0; j < s.size(); ++j) {
        block4(lhs, i, j) = d.beta * block4(C.matrix, i, j) + block4(C.matrix, i, j) * d.beta;
        block4(B, i, j) = m2 * S.matrix(i, j);
      }
    add("assembled_anticommutator", (lhs - B).norm() / B.norm(), 1e-12);
  }

  if (level == "quick") return out;

  {
    const SurfaceQuadrature s = sphere_grid(1.0, 12, 24);
    SurfaceCache sc(s);
    const cplx k(0.0, 1.0);
    const BoundaryOperator S = assemble_single_layer(k, sc);
    const HarmonicBasis& hb = sc.basis();
    double e = 0.0;
    for (int l = 0; l <= 5; ++l)
      for (int m = -l; m <= l; ++m) {
        const Eigen::VectorXcd y = hb.Y.col(harmonic_index(l, m)).cast<cplx>();
        const cplx est = (hb.A.row(harmonic_index(l, m)).cast<cplx>() * (S.matrix * y))(0);
        const cplx ref = sphere_single_layer_eig(k, 1.0, l);
        e = std::max(e, std::abs(est - ref) / std::abs(ref));
      }
    add("sphere_single_layer_oracle", e, 1e-3);
  }

  {
    double e = 0.0;
    for (int t = 0; t < 50; ++t) {
      const cplx z(std::abs(u(rng)) * 5.0 + 0.1, std::abs(u(rng)));
      std::vector<cplx> j, h;
      spherical_bessel_all(7, z, j, h);
      for (int l = 1; l <= 5; ++l) {
        const cplx jd = j[size_t(l - 1)] - double(l + 1) / z * j[size_t(l)];
        const cplx hd = h[size_t(l - 1)] - double(l + 1) / z * h[size_t(l)];
        const double scale = std::max(1.0, std::abs(j[size_t(l)] * hd * z * z));
        e = std::max(e, std::abs((j[size_t(l)] * hd - jd * h[size_t(l)]) * z * z - I1) / scale);
      }
    }
    add("bessel_wronskian", e, 1e-10);
  }

  {
    const PhysParams p(1.0, 1.0);
    const SurfaceQuadrature s = sphere_grid(1.0, 12, 24);
    SurfaceCache sc(s);
    Density phi(4 * s.size());
    for (Eigen::Index i = 0; i < s.size(); ++i) phi.segment<4>(4 * i) << 1.0, 0.5, 0.25, -0.5;
    const auto r = jump_relation_residuals(0.3, sc, phi, p, {0.1, 0.05, 0.025}, {}, 7);
    add("jump_relation_mean", r.mean.extrapolated, 5e-2);
    add("jump_relation_jump", r.jump.extrapolated, 5e-2);
  }

  {
    const SurfaceQuadrature s = sphere_grid(1.0, 8, 16);
    SurfaceCache sc(s);
    const auto modes = schrodinger_sphere_bound_states(-3.0, 1.0, 1.0, 2);
    const auto zeros = schrodinger_bs_zeros(-3.0, sc, 1.0, -6.0, -0.05, 120, 1e-11);
    double e = modes.size() == zeros.size() ? 0.0 : 1.0;
    for (const RadialMode& r : modes) {
      double best = 1e300;
      for (const auto& z : zeros) best = std::min(best, std::abs(z.energy - r.energy));
      e = std::max(e, best);
    }
    add("schrodinger_shooting_vs_bs", e, 1e-8);
  }
  return out;
}

}  // namespace shellspec
