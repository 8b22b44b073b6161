#include "shellspec/assembly.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "shellspec/quadrature.hpp"

namespace shellspec {

namespace {

constexpr double kPi = 3.14159265358979323846;
const cplx I1(0.0, 1.0);

Mat4C mass_matrix(cplx lambda, const PhysParams& p) {
  Mat4C mm = dirac_matrices().beta * cplx(p.m);
  mm.diagonal().array() += lambda / (p.c * p.c);
  return mm;
}

// G(x)·v without forming the 4×4 kernel.
inline Vec4C green_apply(cplx lambda, cplx k, const Vec3& x, const Vec4C& v, const PhysParams& p) {
  const double r = x.norm();
  const cplx e = std::exp(I1 * k * r) / (4.0 * kPi * r);
  const cplx a = (1.0 - I1 * k * r) * I1 / (p.c * r * r);
  const cplx l = lambda / (p.c * p.c);
  Vec4C out;
  out(0) = (l + p.m) * v(0);
  out(1) = (l + p.m) * v(1);
  out(2) = (l - p.m) * v(2);
  out(3) = (l - p.m) * v(3);
  // α·x = [[0, σ·x], [σ·x, 0]], σ·x = [[x3, x1 − i x2], [x1 + i x2, −x3]]
  const cplx xm(x(0), -x(1)), xp(x(0), x(1));
  out(0) += a * (x(2) * v(2) + xm * v(3));
  out(1) += a * (xp * v(2) - x(2) * v(3));
  out(2) += a * (x(2) * v(0) + xm * v(1));
  out(3) += a * (xp * v(0) - x(2) * v(1));
  return out * e;
}

Rule1D funk_hecke_rule(cplx k, double R, int l) {
  const int panels = 1 + int(std::ceil(std::abs(k) * R / 4.0));
  std::vector<double> br(size_t(panels) + 1);
  for (int i = 0; i <= panels; ++i) br[size_t(i)] = double(i) / panels;
  return composite_gauss(br, l + 16);
}

struct TopBlock {
  Eigen::MatrixXcd synth, anal;
};

TopBlock build_truncation(const SurfaceQuadrature& s, const HarmonicBasis& hb) {
  const int L = hb.L, len = 2 * L + 1, off = L * L;
  const auto Lop = angular_momentum_block(hb, s.param, L);
  Eigen::Matrix2cd sig[3];
  sig[0] << 0, 1, 1, 0;
  sig[1] << 0, -I1, I1, 0;
  sig[2] << 1, 0, 0, -1;
  Eigen::MatrixXcd so = Eigen::MatrixXcd::Zero(2 * len, 2 * len);
  for (int d = 0; d < 3; ++d)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) so.block(a * len, b * len, len, len) += sig[d](a, b) * Lop[d];
  so = 0.5 * (so + so.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(so);
  std::vector<int> top;
  for (int q = 0; q < 2 * len; ++q)
    if (es.eigenvalues()(q) > 0.0) top.push_back(q);
  const Eigen::Index n = s.size();
  const Eigen::Index r = 2 * Eigen::Index(top.size());
  TopBlock tb{Eigen::MatrixXcd::Zero(4 * n, r), Eigen::MatrixXcd::Zero(r, 4 * n)};
  const Eigen::MatrixXd Yt = hb.Y.middleCols(off, len);
  const Eigen::MatrixXd At = hb.A.middleRows(off, len);
  for (int pair = 0; pair < 2; ++pair)
    for (size_t t = 0; t < top.size(); ++t) {
      const Eigen::Index col = pair * Eigen::Index(top.size()) + Eigen::Index(t);
      const Eigen::VectorXcd v = es.eigenvectors().col(top[t]);
      for (int sp = 0; sp < 2; ++sp) {
        const Eigen::VectorXcd vs = v.segment(sp * len, len);
        const Eigen::VectorXcd syn = Yt * vs;
        const Eigen::VectorXcd ana = At.transpose() * vs.conjugate();
        for (Eigen::Index i = 0; i < n; ++i) {
          tb.synth(4 * i + 2 * pair + sp, col) = syn(i);
          tb.anal(col, 4 * i + 2 * pair + sp) = ana(i);
        }
      }
    }
  return tb;
}

Eigen::MatrixXcd spectral_scalar(const HarmonicBasis& hb, const Eigen::VectorXcd& mu_l, const Eigen::MatrixXd& left) {
  const int L = hb.L;
  Eigen::VectorXcd d(harmonic_count(L));
  for (int l = 0; l <= L; ++l) d.segment(l * l, 2 * l + 1).setConstant(mu_l(l));
  return left.cast<cplx>() * d.asDiagonal() * hb.A.cast<cplx>();
}

}  // namespace

const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::Auto: return "Auto";
    case Scheme::Spectral: return "Spectral";
    case Scheme::Nystrom: return "Nystrom";
  }
  return "Unknown";
}

Scheme resolve_scheme(const SurfaceQuadrature& s, const AssemblyOptions& o) {
  const bool can = s.kind == SurfaceKind::SphereGrid && s.n_azimuthal >= 2 * s.n_polar;
  if (o.scheme == Scheme::Spectral) {
    if (!can) throw Error(ErrorKind::BadResolution, "spectral scheme needs a sphere grid with n_azimuthal >= 2 n_polar");
    return Scheme::Spectral;
  }
  if (o.scheme == Scheme::Nystrom) return Scheme::Nystrom;
  return can ? Scheme::Spectral : Scheme::Nystrom;
}

SurfaceCache::SurfaceCache(const SurfaceQuadrature& s) : s_(s) {}

const HarmonicBasis& SurfaceCache::basis() const {
  if (!hb_) hb_ = std::make_unique<HarmonicBasis>(harmonic_basis(s_));
  return *hb_;
}

const StaticSelfIntegrals& SurfaceCache::self_integrals() const {
  if (!si_) si_ = std::make_unique<StaticSelfIntegrals>(static_self_integrals(s_));
  return *si_;
}

const Eigen::MatrixXcd& SurfaceCache::truncation_synthesis() const {
  if (zs_.size() == 0) {
    TopBlock tb = build_truncation(s_, basis());
    zs_ = std::move(tb.synth);
    za_ = std::move(tb.anal);
  }
  return zs_;
}

const Eigen::MatrixXcd& SurfaceCache::truncation_analysis() const {
  truncation_synthesis();
  return za_;
}

cplx funk_hecke_single_layer(cplx k, double R, int l) {
  const Rule1D q = funk_hecke_rule(k, R, l);
  cplx sum = 0.0;
  for (Eigen::Index i = 0; i < q.x.size(); ++i) {
    const double u = q.x(i);
    sum += q.w(i) * std::exp(2.0 * I1 * k * R * u) * legendre_all(l, 1.0 - 2.0 * u * u)(l);
  }
  return R * sum;
}

cplx funk_hecke_adjoint_double_layer(cplx k, double R, int l) {
  const Rule1D q = funk_hecke_rule(k, R, l);
  cplx sum = 0.0;
  for (Eigen::Index i = 0; i < q.x.size(); ++i) {
    const double u = q.x(i);
    const cplx z = 2.0 * I1 * k * R * u;
    sum += q.w(i) * std::exp(z) * (z - 1.0) * legendre_all(l, 1.0 - 2.0 * u * u)(l);
  }
  return 0.5 * sum;
}

BoundaryOperator assemble_single_layer(cplx k, const SurfaceCache& sc, const AssemblyOptions& o) {
  const SurfaceQuadrature& s = sc.surface();
  const Eigen::Index n = s.size();
  BoundaryOperator op;
  op.kind = OpKind::SingleLayer;
  op.lambda = k;
  op.nodes = n;
  op.scheme = resolve_scheme(s, o);
  if (op.scheme == Scheme::Spectral) {
    const HarmonicBasis& hb = sc.basis();
    Eigen::VectorXcd mu(hb.L + 1);
    for (int l = 0; l <= hb.L; ++l) mu(l) = funk_hecke_single_layer(k, s.a, l);
    op.matrix = spectral_scalar(hb, mu, hb.Y);
    return op;
  }
  op.matrix.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double sub = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double r = (s.node(i) - s.node(j)).norm();
      op.matrix(i, j) = std::exp(I1 * k * r) / (4.0 * kPi * r) * s.weights(j);
      sub += s.weights(j) / (4.0 * kPi * r);
    }
    const double w = s.weights(i);
    double stat;
    if (o.diagonal == DiagonalRule::EquivalentDisk) stat = 0.5 * std::sqrt(w / kPi);
    else if (s.parametric()) stat = sc.self_integrals().I(i) - sub;
    else stat = sc.self_integrals().I(i);
    op.matrix(i, i) = stat + I1 * k * w / (4.0 * kPi);
  }
  return op;
}

BoundaryOperator assemble_single_layer(cplx k, const SurfaceQuadrature& s, const AssemblyOptions& o) {
  SurfaceCache sc(s);
  return assemble_single_layer(k, sc, o);
}

BoundaryOperator assemble_C(cplx lambda, const SurfaceCache& sc, const PhysParams& p, const AssemblyOptions& o) {
  const SurfaceQuadrature& s = sc.surface();
  const cplx k = momentum_k(lambda, p);
  const Eigen::Index n = s.size();
  const Mat4C mm = mass_matrix(lambda, p);
  const auto& dm = dirac_matrices();
  BoundaryOperator op;
  op.kind = OpKind::C;
  op.lambda = lambda;
  op.nodes = n;
  op.scheme = resolve_scheme(s, o);
  op.matrix.resize(4 * n, 4 * n);

  if (op.scheme == Scheme::Spectral) {
    const HarmonicBasis& hb = sc.basis();
    const double R = s.a;
    Eigen::VectorXcd muS(hb.L + 1), muK(hb.L + 1);
    for (int l = 0; l <= hb.L; ++l) {
      muS(l) = funk_hecke_single_layer(k, R, l);
      muK(l) = funk_hecke_adjoint_double_layer(k, R, l);
    }
    const Eigen::MatrixXcd S = spectral_scalar(hb, muS, hb.Y);
    const Eigen::MatrixXcd K = spectral_scalar(hb, muK, hb.Y);
    std::array<Eigen::MatrixXcd, 3> D;
    for (int d = 0; d < 3; ++d) D[d] = spectral_scalar(hb, muS, hb.grad[d] / R);
    const cplx f = -I1 / p.c;
    for (Eigen::Index i = 0; i < n; ++i) {
      const Mat4C an = alpha_dot(s.normal(i)) * f;
      for (Eigen::Index j = 0; j < n; ++j) {
        block4(op.matrix, i, j) = mm * S(i, j) + an * K(i, j) +
                                  f * (dm.alpha[0] * D[0](i, j) + dm.alpha[1] * D[1](i, j) + dm.alpha[2] * D[2](i, j));
      }
    }
    const Eigen::MatrixXcd& zs = sc.truncation_synthesis();
    const Eigen::MatrixXcd cz = op.matrix * zs;
    op.matrix.noalias() -= cz * sc.truncation_analysis();
    return op;
  }

  for (Eigen::Index i = 0; i < n; ++i) {
    const Vec3 xi = s.node(i);
    double sub = 0.0;
    Vec3 subJ = Vec3::Zero();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const Vec3 d = xi - s.node(j);
      const double r = d.norm(), w = s.weights(j);
      block4(op.matrix, i, j) = green_function_k(lambda, k, d, p) * w;
      sub += w / (4.0 * kPi * r);
      subJ += d * (w / (4.0 * kPi * r * r * r));
    }
    const double w = s.weights(i);
    Mat4C diag = mm * (I1 * k * w / (4.0 * kPi));
    if (o.diagonal == DiagonalRule::EquivalentDisk) {
      diag += mm * (0.5 * std::sqrt(w / kPi));
    } else if (s.parametric()) {
      const auto& si = sc.self_integrals();
      diag += mm * (si.I(i) - sub);
      const Vec3 J = si.J.row(i).transpose() - subJ;
      diag += (I1 / p.c) * alpha_dot(J);
    } else {
      const auto& si = sc.self_integrals();
      diag += mm * si.I(i);
      diag += (I1 / p.c) * alpha_dot(Vec3(si.J.row(i).transpose()));
    }
    block4(op.matrix, i, i) = diag;
  }
  return op;
}

BoundaryOperator assemble_C(cplx lambda, const SurfaceQuadrature& s, const PhysParams& p, const AssemblyOptions& o) {
  SurfaceCache sc(s);
  return assemble_C(lambda, sc, p, o);
}

BoundaryOperator bs_from_C(const BoundaryOperator& C, const Coupling& cp) {
  BoundaryOperator op = C;
  op.kind = OpKind::BS;
  op.coupling = cp;
  const Eigen::Index n = C.nodes;
  // rows 4i+a: multiply by η ± τ
  for (Eigen::Index i = 0; i < n; ++i) {
    op.matrix.middleRows(4 * i, 2) *= (cp.eta + cp.tau);
    op.matrix.middleRows(4 * i + 2, 2) *= (cp.eta - cp.tau);
  }
  op.matrix.diagonal().array() += 1.0;
  return op;
}

BoundaryOperator bs_matrix(cplx lambda, const Coupling& cp, const SurfaceCache& sc, const PhysParams& p,
                           const AssemblyOptions& o) {
  return bs_from_C(assemble_C(lambda, sc, p, o), cp);
}

BoundaryOperator bs_matrix(cplx lambda, const Coupling& cp, const SurfaceQuadrature& s, const PhysParams& p,
                           const AssemblyOptions& o) {
  SurfaceCache sc(s);
  return bs_matrix(lambda, cp, sc, p, o);
}

Eigen::MatrixXcd truncation_projector(const SurfaceCache& sc, const AssemblyOptions& o) {
  const Eigen::Index n4 = 4 * sc.surface().size();
  Eigen::MatrixXcd P = Eigen::MatrixXcd::Identity(n4, n4);
  if (resolve_scheme(sc.surface(), o) == Scheme::Spectral)
    P.noalias() -= sc.truncation_synthesis() * sc.truncation_analysis();
  return P;
}

namespace {

double nearest_node_distance(const SurfaceQuadrature& s, const Vec3& x) {
  return (s.nodes.rowwise() - x.transpose()).rowwise().norm().minCoeff();
}

Vec4C phi_parametric_near(cplx lambda, cplx k, const SurfaceCache& sc, const Eigen::MatrixXcd& coef, const Vec3& x,
                          const PhysParams& p, const PhiOptions& o) {
  const SurfaceQuadrature& s = sc.surface();
  const int L = sc.basis().L;
  const int nb = harmonic_count(L);
  const Vec3 s0 = closest_param(s, x);
  const double d = std::max((x - s.map(s0)).norm(), 1e-10);
  const double scale = std::max(s.a, s.b);
  std::vector<double> br{0.0};
  double t = std::min(d / (4.0 * scale), 0.25);
  while (t < kPi) {
    br.push_back(t);
    t *= 2.0;
  }
  br.push_back(kPi);
  const Rule1D g = composite_gauss(br, o.panel_points);
  const int nph = 2 * (L + 1) + 16;
  const double dph = 2.0 * kPi / nph;
  Vec3 e1, e2;
  tangent_frame(s0, e1, e2);
  std::vector<double> Y(size_t(nb), 0.0);
  Vec4C acc = Vec4C::Zero();
  for (Eigen::Index a = 0; a < g.x.size(); ++a) {
    const double ct = std::cos(g.x(a)), st = std::sin(g.x(a));
    for (int b = 0; b < nph; ++b) {
      const double ph = (b + 0.5) * dph;
      const Vec3 u = ct * s0 + st * (std::cos(ph) * e1 + std::sin(ph) * e2);
      real_harmonics(L, u, Y.data());
      const Eigen::Map<const Eigen::RowVectorXd> yr(Y.data(), nb);
      const Vec4C dens = (yr.cast<cplx>() * coef).transpose();
      const double w = g.w(a) * st * dph * s.area_factor(u);
      acc += green_apply(lambda, k, x - s.map(u), dens, p) * w;
    }
  }
  return acc;
}

void tri_integrate(cplx lambda, cplx k, const Vec3& x, const Vec3& p0, const Vec3& p1, const Vec3& p2,
                   const Vec4C& dens, const PhysParams& p, int depth, int max_depth, Vec4C& acc) {
  const Vec3 c = (p0 + p1 + p2) / 3.0;
  const double diam = std::max({(p1 - p0).norm(), (p2 - p1).norm(), (p0 - p2).norm()});
  if ((x - c).norm() > 2.5 * diam || depth >= max_depth) {
    // 6-point degree-4 rule
    static const double wa = 0.223381589678011, wb = 0.109951743655322;
    static const double a1 = 0.445948490915965, a2 = 0.091576213509771;
    const double area = 0.5 * (p1 - p0).cross(p2 - p0).norm();
    const double bary[6][3] = {{a1, a1, 1 - 2 * a1}, {a1, 1 - 2 * a1, a1}, {1 - 2 * a1, a1, a1},
                               {a2, a2, 1 - 2 * a2}, {a2, 1 - 2 * a2, a2}, {1 - 2 * a2, a2, a2}};
    for (int q = 0; q < 6; ++q) {
      const Vec3 y = bary[q][0] * p0 + bary[q][1] * p1 + bary[q][2] * p2;
      const Vec3 d = x - y;
      if (d.norm() == 0.0) continue;
      acc += green_apply(lambda, k, d, dens, p) * ((q < 3 ? wa : wb) * area);
    }
    return;
  }
  const Vec3 m01 = 0.5 * (p0 + p1), m12 = 0.5 * (p1 + p2), m20 = 0.5 * (p2 + p0);
  tri_integrate(lambda, k, x, p0, m01, m20, dens, p, depth + 1, max_depth, acc);
  tri_integrate(lambda, k, x, m01, p1, m12, dens, p, depth + 1, max_depth, acc);
  tri_integrate(lambda, k, x, m20, m12, p2, dens, p, depth + 1, max_depth, acc);
  tri_integrate(lambda, k, x, m01, m12, m20, dens, p, depth + 1, max_depth, acc);
}

}  // namespace

std::vector<Vec4C> apply_phi(cplx lambda, const SurfaceCache& sc, const Density& phi, const std::vector<Vec3>& points,
                             const PhysParams& p, const PhiOptions& o) {
  const SurfaceQuadrature& s = sc.surface();
  const cplx k = momentum_k(lambda, p);
  const Eigen::Index n = s.size();
  Eigen::MatrixXcd coef;
  std::vector<Vec4C> out;
  out.reserve(points.size());
  for (const Vec3& x : points) {
    const double dn = nearest_node_distance(s, x);
    if (dn <= 1e-12 * (1.0 + x.norm())) throw Error(ErrorKind::PointOnSurface, "evaluation point coincides with a node");
    Vec4C acc = Vec4C::Zero();
    if (dn > o.near_factor * s.h) {
      for (Eigen::Index j = 0; j < n; ++j)
        acc += green_apply(lambda, k, x - s.node(j), phi.segment<4>(4 * j), p) * s.weights(j);
    } else if (s.parametric()) {
      if (coef.size() == 0) {
        const HarmonicBasis& hb = sc.basis();
        coef.resize(harmonic_count(hb.L), 4);
        for (int a = 0; a < 4; ++a) {
          Eigen::VectorXcd comp(n);
          for (Eigen::Index j = 0; j < n; ++j) comp(j) = phi(4 * j + a);
          coef.col(a) = hb.A.cast<cplx>() * comp;
        }
      }
      const Vec3 s0 = closest_param(s, x);
      const double sd = (x - s.map(s0)).norm();
      if (sd < 1e-12 * (1.0 + x.norm())) throw Error(ErrorKind::PointOnSurface, "evaluation point lies on the surface");
      acc = phi_parametric_near(lambda, k, sc, coef, x, p, o);
    } else {
      for (Eigen::Index f = 0; f < n; ++f) {
        const Vec3 p0 = s.vertices.row(s.faces(f, 0)), p1 = s.vertices.row(s.faces(f, 1)),
                   p2 = s.vertices.row(s.faces(f, 2));
        tri_integrate(lambda, k, x, p0, p1, p2, phi.segment<4>(4 * f), p, 0, o.max_depth, acc);
      }
    }
    out.push_back(acc);
  }
  return out;
}

Density apply_phi_star(cplx lambda, const SurfaceQuadrature& s, const VolumeQuadrature& vq,
                       const std::vector<Vec4C>& samples, const PhysParams& p) {
  if (Eigen::Index(samples.size()) != vq.nodes.rows())
    throw Error(ErrorKind::ConfigError, "sample count does not match volume quadrature");
  const cplx lb = std::conj(lambda);
  const cplx k = momentum_k(lb, p);
  const Eigen::Index n = s.size();
  Density out = Density::Zero(4 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vec3 xi = s.node(i);
    Vec4C acc = Vec4C::Zero();
    for (Eigen::Index q = 0; q < vq.nodes.rows(); ++q) {
      const Vec3 d = xi - vq.nodes.row(q).transpose();
      if (d.norm() <= 1e-12 * (1.0 + xi.norm()))
        throw Error(ErrorKind::VolumeNodeOnSurface, "volume node coincides with a surface node");
      if (samples[size_t(q)].isZero(0.0)) continue;
      acc += green_apply(lb, k, d, samples[size_t(q)], p) * vq.weights(q);
    }
    out.segment<4>(4 * i) = acc;
  }
  return out;
}

std::vector<Vec4C> free_resolvent(cplx lambda, const SpinorField& f, const std::vector<Vec3>& points,
                                  const PhysParams& p, const BallRule& rule) {
  const cplx k = momentum_k(lambda, p);
  std::vector<double> br(size_t(rule.radial_panels) + 1);
  for (int i = 0; i <= rule.radial_panels; ++i) br[size_t(i)] = rule.radius * i / rule.radial_panels;
  const Rule1D rr = composite_gauss(br, rule.radial_points);
  const Rule1D tt = gauss_legendre(rule.polar);
  const double dph = 2.0 * kPi / rule.azimuthal;
  std::vector<Vec3> dirs;
  std::vector<double> dw;
  for (int a = 0; a < rule.polar; ++a) {
    const double ct = tt.x(a), st = std::sqrt(1.0 - ct * ct);
    for (int b = 0; b < rule.azimuthal; ++b) {
      dirs.emplace_back(st * std::cos(b * dph), st * std::sin(b * dph), ct);
      dw.push_back(tt.w(a) * dph);
    }
  }
  std::vector<Vec4C> out;
  out.reserve(points.size());
  for (const Vec3& x : points) {
    Vec4C acc = Vec4C::Zero();
    for (Eigen::Index r = 0; r < rr.x.size(); ++r) {
      const double rho = rr.x(r);
      for (size_t q = 0; q < dirs.size(); ++q) {
        const Vec3 y = x + rho * dirs[q];
        const Vec4C fy = f(y);
        if (fy.isZero(0.0)) continue;
        acc += green_apply(lambda, k, x - y, fy, p) * (rr.w(r) * rho * rho * dw[q]);
      }
    }
    out.push_back(acc);
  }
  return out;
}

VolumeQuadrature box_quadrature(const Vec3& lo, const Vec3& hi, int n) {
  Rule1D r[3] = {gauss_legendre(n, lo(0), hi(0)), gauss_legendre(n, lo(1), hi(1)), gauss_legendre(n, lo(2), hi(2))};
  VolumeQuadrature vq;
  vq.nodes.resize(Eigen::Index(n) * n * n, 3);
  vq.weights.resize(Eigen::Index(n) * n * n);
  Eigen::Index q = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c, ++q) {
        vq.nodes.row(q) << r[0].x(a), r[1].x(b), r[2].x(c);
        vq.weights(q) = r[0].w(a) * r[1].w(b) * r[2].w(c);
      }
  return vq;
}

namespace {

template <typename T> void put_le(std::ostream& os, T v) {
  unsigned char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
  os.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <typename T> T get_le(std::istream& is) {
  unsigned char buf[sizeof(T)];
  is.read(reinterpret_cast<char*>(buf), sizeof(T));
  if (!is) throw Error(ErrorKind::ParseError, "truncated operator file");
  if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
  T v;
  std::memcpy(&v, buf, sizeof(T));
  return v;
}

}  // namespace

void write_operator(const std::string& path, const BoundaryOperator& op) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorKind::ConfigError, "cannot write " + path);
  os.write("SHSP", 4);
  put_le<std::uint32_t>(os, std::uint32_t(op.matrix.rows()));
  put_le<std::uint8_t>(os, std::uint8_t(op.kind));
  put_le<double>(os, op.lambda.real());
  put_le<double>(os, op.lambda.imag());
  for (Eigen::Index i = 0; i < op.matrix.rows(); ++i)
    for (Eigen::Index j = 0; j < op.matrix.cols(); ++j) {
      put_le<double>(os, op.matrix(i, j).real());
      put_le<double>(os, op.matrix(i, j).imag());
    }
}

BoundaryOperator read_operator(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorKind::ParseError, "cannot open " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::string(magic, 4) != "SHSP") throw Error(ErrorKind::ParseError, "bad magic");
  BoundaryOperator op;
  const auto dim = get_le<std::uint32_t>(is);
  op.kind = OpKind(get_le<std::uint8_t>(is));
  const double re = get_le<double>(is), im = get_le<double>(is);
  op.lambda = cplx(re, im);
  op.matrix.resize(dim, dim);
  for (Eigen::Index i = 0; i < Eigen::Index(dim); ++i)
    for (Eigen::Index j = 0; j < Eigen::Index(dim); ++j) {
      const double a = get_le<double>(is), b = get_le<double>(is);
      op.matrix(i, j) = cplx(a, b);
    }
  op.nodes = op.kind == OpKind::SingleLayer ? Eigen::Index(dim) : Eigen::Index(dim) / 4;
  return op;
}

}  // namespace shellspec
