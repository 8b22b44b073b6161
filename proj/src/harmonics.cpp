#include "shellspec/harmonics.hpp"

#include <cmath>
#include <vector>

#include "shellspec/surface.hpp"

namespace shellspec {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Normalized associated Legendre P̄_l^m(t), m ≥ 0, row-major by (l, m).
void assoc_legendre(int L, double t, double st, std::vector<double>& P) {
  P.assign(size_t((L + 1) * (L + 1)), 0.0);
  auto at = [&](int l, int m) -> double& { return P[size_t(l * (L + 1) + m)]; };
  at(0, 0) = 1.0 / std::sqrt(4.0 * kPi);
  for (int m = 1; m <= L; ++m) at(m, m) = std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * st * at(m - 1, m - 1);
  for (int m = 0; m < L; ++m) at(m + 1, m) = std::sqrt(2.0 * m + 3.0) * t * at(m, m);
  for (int m = 0; m <= L; ++m)
    for (int l = m + 2; l <= L; ++l) {
      const double a = std::sqrt((4.0 * l * l - 1.0) / double(l * l - m * m));
      const double b = std::sqrt(((l - 1.0) * (l - 1.0) - m * m) / (4.0 * (l - 1.0) * (l - 1.0) - 1.0));
      at(l, m) = a * (t * at(l - 1, m) - b * at(l - 2, m));
    }
}

}  // namespace

void real_harmonics(int L, const Vec3& s, double* out) {
  const double t = std::clamp(s(2), -1.0, 1.0);
  const double st = std::hypot(s(0), s(1));
  const double phi = std::atan2(s(1), s(0));
  std::vector<double> P;
  assoc_legendre(L, t, st, P);
  const double r2 = std::sqrt(2.0);
  for (int l = 0; l <= L; ++l) {
    out[harmonic_index(l, 0)] = P[size_t(l * (L + 1))];
    for (int m = 1; m <= l; ++m) {
      const double p = r2 * P[size_t(l * (L + 1) + m)];
      out[harmonic_index(l, m)] = p * std::cos(m * phi);
      out[harmonic_index(l, -m)] = p * std::sin(m * phi);
    }
  }
}

void real_harmonics_grad(int L, const Vec3& s, double* val, double* gx, double* gy, double* gz) {
  const double t = std::clamp(s(2), -1.0, 1.0);
  const double st = std::hypot(s(0), s(1));
  const double phi = std::atan2(s(1), s(0));
  const double cp = std::cos(phi), sp = std::sin(phi);
  const Vec3 eth(t * cp, t * sp, -st), eph(-sp, cp, 0.0);
  std::vector<double> P;
  assoc_legendre(L, t, st, P);
  auto at = [&](int l, int m) { return (m > l || l < 0) ? 0.0 : P[size_t(l * (L + 1) + m)]; };
  const double r2 = std::sqrt(2.0);
  for (int l = 0; l <= L; ++l)
    for (int m = 0; m <= l; ++m) {
      const double p = at(l, m);
      const double c = l > 0 ? std::sqrt((2.0 * l + 1.0) / (2.0 * l - 1.0) * double(l * l - m * m)) : 0.0;
      const double dp = (l * t * p - c * at(l - 1, m)) / st;
      const double f = m == 0 ? 1.0 : r2;
      const double cm = std::cos(m * phi), sm = std::sin(m * phi);
      auto put = [&](int idx, double v, double dth, double dph_over_st) {
        val[idx] = v;
        const Vec3 g = dth * eth + dph_over_st * eph;
        gx[idx] = g(0);
        gy[idx] = g(1);
        gz[idx] = g(2);
      };
      put(harmonic_index(l, m), f * p * cm, f * dp * cm, -f * m * p * sm / st);
      if (m > 0) put(harmonic_index(l, -m), f * p * sm, f * dp * sm, f * m * p * cm / st);
    }
}

HarmonicBasis harmonic_basis(const SurfaceQuadrature& s, int L) {
  if (!s.parametric()) throw Error(ErrorKind::BadResolution, "harmonic basis needs a parametric grid");
  if (L < 0) L = s.n_polar - 1;
  if (L > s.n_polar - 1 || 2 * L >= s.n_azimuthal)
    throw Error(ErrorKind::BadResolution, "grid cannot resolve harmonics of the requested degree");
  HarmonicBasis hb;
  hb.L = L;
  const int nb = harmonic_count(L);
  const Eigen::Index n = s.size();
  hb.Y.resize(n, nb);
  for (auto& g : hb.grad) g.resize(n, nb);
  std::vector<double> v(static_cast<size_t>(nb)), gx(v), gy(v), gz(v);
  for (Eigen::Index i = 0; i < n; ++i) {
    real_harmonics_grad(L, s.param.row(i).transpose(), v.data(), gx.data(), gy.data(), gz.data());
    for (int b = 0; b < nb; ++b) {
      hb.Y(i, b) = v[size_t(b)];
      hb.grad[0](i, b) = gx[size_t(b)];
      hb.grad[1](i, b) = gy[size_t(b)];
      hb.grad[2](i, b) = gz[size_t(b)];
    }
  }
  const double dphi = 2.0 * kPi / s.n_azimuthal;
  Eigen::VectorXd w(n);
  for (int i = 0; i < s.n_polar; ++i) w.segment(Eigen::Index(i) * s.n_azimuthal, s.n_azimuthal).setConstant(s.polar_w(i) * dphi);
  hb.A = hb.Y.transpose() * w.asDiagonal();
  return hb;
}

std::array<Eigen::MatrixXcd, 3> angular_momentum_block(const HarmonicBasis& hb, const Eigen::MatrixX3d& sx, int l) {
  const int off = l * l, len = 2 * l + 1;
  std::array<Eigen::MatrixXcd, 3> out;
  const Eigen::MatrixXd A = hb.A.middleRows(off, len);
  for (int d = 0; d < 3; ++d) {
    const int e = (d + 1) % 3, f = (d + 2) % 3;
    // (s × ∇Y)_d = s_e ∂_f Y − s_f ∂_e Y
    const Eigen::MatrixXd cr = sx.col(e).asDiagonal() * hb.grad[f].middleCols(off, len) -
                               sx.col(f).asDiagonal() * hb.grad[e].middleCols(off, len);
    out[d] = cplx(0.0, -1.0) * (A * cr).cast<cplx>();
  }
  return out;
}

}  // namespace shellspec
