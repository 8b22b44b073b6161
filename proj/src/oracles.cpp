#include "shellspec/oracles.hpp"

#include <algorithm>
#include <cmath>

#include "shellspec/linalg.hpp"

namespace shellspec {

namespace {

const cplx I1(0.0, 1.0);

cplx j_series(int l, cplx z) {
  cplx pre = 1.0;
  for (int i = 1; i <= l; ++i) pre *= z / double(2 * i + 1);
  cplx term = 1.0, sum = 1.0;
  const cplx z2 = -0.5 * z * z;
  for (int n = 1; n < 40; ++n) {
    term *= z2 / (double(n) * double(2 * l + 2 * n + 1));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return pre * sum;
}

}  // namespace

void spherical_bessel_all(int lmax, cplx z, std::vector<cplx>& j, std::vector<cplx>& h) {
  j.assign(size_t(lmax) + 1, 0.0);
  h.clear();
  const double az = std::abs(z);
  if (az < 0.5) {
    for (int l = 0; l <= lmax; ++l) j[size_t(l)] = j_series(l, z);
  } else {
    const int start = lmax + int(std::ceil(az)) + 40;
    cplx jp1 = 0.0, jc = 1e-30;
    std::vector<cplx> tmp(size_t(start) + 2, 0.0);
    tmp[size_t(start)] = jc;
    for (int n = start; n >= 1; --n) {
      const cplx jm1 = double(2 * n + 1) / z * jc - jp1;
      jp1 = jc;
      jc = jm1;
      tmp[size_t(n - 1)] = jc;
      if (std::abs(jc) > 1e200) {
        for (int q = n - 1; q <= start; ++q) tmp[size_t(q)] *= 1e-200;
        jc *= 1e-200;
        jp1 *= 1e-200;
      }
    }
    const cplx j0 = std::sin(z) / z;
    const cplx j1 = std::sin(z) / (z * z) - std::cos(z) / z;
    const cplx scale = std::abs(j0) >= std::abs(j1) ? j0 / tmp[0] : j1 / tmp[1];
    for (int l = 0; l <= lmax; ++l) j[size_t(l)] = tmp[size_t(l)] * scale;
  }
  if (az == 0.0) return;
  h.assign(size_t(lmax) + 1, 0.0);
  const cplx e = std::exp(I1 * z);
  h[0] = -I1 * e / z;
  if (lmax >= 1) h[1] = -e * (z + I1) / (z * z);
  for (int l = 1; l < lmax; ++l) h[size_t(l + 1)] = double(2 * l + 1) / z * h[size_t(l)] - h[size_t(l - 1)];
}

BesselPair spherical_bessel(int l, cplx z) {
  if (z == 0.0 && l >= 0) {
    throw Error(ErrorKind::OriginSingularity, "h_l is singular at z = 0");
  }
  std::vector<cplx> j, h;
  spherical_bessel_all(std::max(l, 1), z, j, h);
  return {j[size_t(l)], h[size_t(l)]};
}

cplx sphere_single_layer_eig(cplx k, double R, int l) {
  if (k == 0.0) return R / double(2 * l + 1);
  const BesselPair b = spherical_bessel(l, k * R);
  return I1 * k * R * R * b.j * b.h;
}

cplx schrodinger_k(cplx lambda, double m) {
  if (lambda.imag() == 0.0) {
    if (lambda.real() >= 0.0) throw Error(ErrorKind::EssentialSpectrumPoint, "lambda >= 0 is in the Schrodinger essential spectrum");
    return cplx(0.0, std::sqrt(-2.0 * m * lambda.real()));
  }
  cplx k = std::sqrt(2.0 * m * lambda);
  if (k.imag() < 0.0) k = -k;
  return k;
}

BoundaryOperator schrodinger_kernels(cplx lambda, double m, const SurfaceCache& sc, const AssemblyOptions& o) {
  BoundaryOperator op = assemble_single_layer(schrodinger_k(lambda, m), sc, o);
  op.matrix *= 2.0 * m;
  op.lambda = lambda;
  return op;
}

namespace {

struct State {
  double u, du;
};

// u'' = (l(l+1)/r² + q²) u by classical RK4 from r0 to r1.
State rk4(State s, double r0, double r1, int steps, double ll, double q2) {
  const double h = (r1 - r0) / steps;
  auto f = [&](double r, const State& y) { return State{y.du, (ll / (r * r) + q2) * y.u}; };
  double r = r0;
  for (int i = 0; i < steps; ++i) {
    const State k1 = f(r, s);
    const State k2 = f(r + 0.5 * h, {s.u + 0.5 * h * k1.u, s.du + 0.5 * h * k1.du});
    const State k3 = f(r + 0.5 * h, {s.u + 0.5 * h * k2.u, s.du + 0.5 * h * k2.du});
    const State k4 = f(r + h, {s.u + h * k3.u, s.du + h * k3.du});
    s.u += h / 6.0 * (k1.u + 2 * k2.u + 2 * k3.u + k4.u);
    s.du += h / 6.0 * (k1.du + 2 * k2.du + 2 * k3.du + k4.du);
    r += h;
    const double big = std::max(std::abs(s.u), std::abs(s.du));
    if (big > 1e100) {
      s.u /= big;
      s.du /= big;
    }
  }
  return s;
}

}  // namespace

double radial_matching(double eta, double m, double R, int l, double energy, int steps) {
  const double q2 = -2.0 * m * energy, q = std::sqrt(q2);
  const double ll = double(l) * (l + 1);
  // interior: regular solution, started from its power series near 0
  const double r0 = 1e-3 * R;
  double a = 1.0, u = 0.0, du = 0.0;
  for (int n = 0; n < 30; ++n) {
    if (n > 0) a *= q2 / (2.0 * n * (2.0 * n + 2.0 * l + 1.0));
    const double pw = std::pow(r0, l + 1 + 2 * n);
    u += a * pw;
    du += a * (l + 1 + 2 * n) * pw / r0;
  }
  const State in = rk4({u, du}, r0, R, steps, ll, q2);
  // exterior: u = r·k_l(qr) = e^{−qr}·Σ_k a_k (qr)^{−k} up to a constant
  const double x = q * R;
  double p = 0.0, dp = 0.0, ak = 1.0;
  for (int k = 0; k <= l; ++k) {
    if (k > 0) ak *= double((l + k) * (l - k + 1)) / (2.0 * k);
    p += ak * std::pow(x, -k);
    dp -= k * ak * std::pow(x, -k - 1);
  }
  const double lout = q * (dp / p - 1.0);
  return lout - in.du / in.u - 2.0 * m * eta;
}

std::vector<RadialMode> schrodinger_sphere_bound_states(double eta, double m, double R, int l_max) {
  std::vector<RadialMode> modes;
  if (eta >= 0.0) return modes;
  const double lo = -50.0 * m * eta * eta, hi = -1e-8;
  const double qlo = std::sqrt(-2.0 * m * hi), qhi = std::sqrt(-2.0 * m * lo);
  const int n = 600;
  for (int l = 0; l <= l_max; ++l) {
    auto F = [&](double q) { return radial_matching(eta, m, R, l, -q * q / (2.0 * m)); };
    double qa = qlo, fa = F(qa);
    for (int i = 1; i <= n; ++i) {
      // geometric grid in q
      const double qb = qlo * std::pow(qhi / qlo, double(i) / n);
      const double fb = F(qb);
      if ((fa < 0.0) != (fb < 0.0)) {
        double x0 = qa, x1 = qb, f0 = fa;
        for (int it = 0; it < 200 && (x1 - x0) > 1e-15 * x1; ++it) {
          const double xm = 0.5 * (x0 + x1), fm = F(xm);
          if ((fm < 0.0) == (f0 < 0.0)) {
            x0 = xm;
            f0 = fm;
          } else {
            x1 = xm;
          }
        }
        const double qr = 0.5 * (x0 + x1);
        const double res = std::abs(F(qr));
        if (res < 1e-6) modes.push_back({l, -qr * qr / (2.0 * m), res});  // sign flips across poles are dropped
      }
      qa = qb;
      fa = fb;
    }
  }
  return modes;
}

SchrodingerScan schrodinger_bs_scan(double eta, const SurfaceCache& sc, double m, const std::vector<double>& grid,
                                    const AssemblyOptions& o) {
  SchrodingerScan out;
  const Eigen::VectorXd w = sc.surface().weights;
  for (double l : grid) {
    if (!(l < 0.0)) throw Error(ErrorKind::EssentialSpectrumPoint, "grid must be strictly negative");
    BoundaryOperator D = schrodinger_kernels(l, m, sc, o);
    Eigen::MatrixXcd B = eta * D.matrix;
    B.diagonal().array() += 1.0;
    out.lambda.push_back(l);
    out.sigma_min.push_back(smallest_singular_values(weighted(B, w, 1), 1)(0));
  }
  return out;
}

std::vector<SchrodingerZero> schrodinger_bs_zeros(double eta, const SurfaceCache& sc, double m, double lo, double hi,
                                                  int n_samples, double tol, const AssemblyOptions& o) {
  std::vector<double> grid(static_cast<size_t>(n_samples));
  for (int i = 0; i < n_samples; ++i) grid[size_t(i)] = lo + (hi - lo) * i / (n_samples - 1);
  const SchrodingerScan sc0 = schrodinger_bs_scan(eta, sc, m, grid, o);
  const Eigen::VectorXd w = sc.surface().weights;
  auto sigma = [&](double l) {
    BoundaryOperator D = schrodinger_kernels(l, m, sc, o);
    Eigen::MatrixXcd B = eta * D.matrix;
    B.diagonal().array() += 1.0;
    return smallest_singular_values(weighted(B, w, 1), 1)(0);
  };
  std::vector<SchrodingerZero> out;
  for (int i = 1; i + 1 < n_samples; ++i) {
    const double s = sc0.sigma_min[size_t(i)];
    if (s < sc0.sigma_min[size_t(i - 1)] && s <= sc0.sigma_min[size_t(i + 1)] && s < 0.25) {
      const auto gm = golden_minimize(sigma, grid[size_t(i - 1)], grid[size_t(i + 1)], tol);
      BoundaryOperator D = schrodinger_kernels(gm.x, m, sc, o);
      Eigen::MatrixXcd B = eta * D.matrix;
      B.diagonal().array() += 1.0;
      const Eigen::VectorXd sv = smallest_singular_values(weighted(B, w, 1), 16);
      int mult = 0;
      for (Eigen::Index q = 0; q < sv.size(); ++q)
        if (sv(q) <= 1e-2) ++mult;
      out.push_back({gm.x, gm.f, mult});
    }
  }
  return out;
}

}  // namespace shellspec
