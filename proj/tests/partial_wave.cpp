#include "partial_wave.hpp"

#include <algorithm>
#include <cmath>

namespace pw {

namespace {

void bessel_ik(int l, double x, double& i, double& k, double& di, double& dk) {
  const double si = std::sqrt(M_PI / (2.0 * x)), sk = std::sqrt(2.0 / (M_PI * x));
  i = si * std::cyl_bessel_i(l + 0.5, x);
  k = sk * std::cyl_bessel_k(l + 0.5, x);
  const double ip = si * std::cyl_bessel_i(l == 0 ? 1.5 : l - 0.5, x);
  const double kp = sk * std::cyl_bessel_k(l == 0 ? 1.5 : l - 0.5, x);
  di = l == 0 ? ip : ip - (l + 1) / x * i;
  dk = l == 0 ? -kp : -kp - (l + 1) / x * k;
}

int ell(int kappa) { return kappa > 0 ? kappa : -kappa - 1; }

}  // namespace

double yukawa_single_layer(double q, double R, int l) {
  double i, k, di, dk;
  bessel_ik(l, q * R, i, k, di, dk);
  return q * R * R * i * k;
}

double yukawa_adjoint_double_layer(double q, double R, int l) {
  double i, k, di, dk;
  bessel_ik(l, q * R, i, k, di, dk);
  return 0.5 * q * q * R * R * (i * dk + di * k);
}

double det_kappa(double lambda, int kappa, double eta, double tau, double m, double c, double R) {
  const double q = std::sqrt((m * c - lambda / c) * (m * c + lambda / c));
  const int a = ell(kappa), b = ell(-kappa);
  const double sa = yukawa_single_layer(q, R, a), sb = yukawa_single_layer(q, R, b);
  const double ka = yukawa_adjoint_double_layer(q, R, a), kb = yukawa_adjoint_double_layer(q, R, b);
  const double c11 = (lambda / (c * c) + m) * sa, c22 = (lambda / (c * c) - m) * sb;
  // off-diagonal entries are i/c times these
  const double c12 = (kb + (1.0 - kappa) * sb / R) / c, c21 = (ka + (1.0 + kappa) * sa / R) / c;
  const double p = eta + tau, n = eta - tau;
  return (1.0 + p * c11) * (1.0 + n * c22) + p * n * c12 * c21;
}

std::vector<Level> levels(double eta, double tau, double m, double c, double R, int kappa_max, int samples) {
  std::vector<Level> out;
  const double E = m * c * c, lo = -E * (1.0 - 1e-9), hi = E * (1.0 - 1e-9);
  for (int kappa = -kappa_max; kappa <= kappa_max; ++kappa) {
    if (kappa == 0) continue;
    auto f = [&](double l) { return det_kappa(l, kappa, eta, tau, m, c, R); };
    double xa = lo, fa = f(xa);
    for (int s = 1; s <= samples; ++s) {
      const double xb = lo + (hi - lo) * s / samples, fb = f(xb);
      if ((fa < 0.0) != (fb < 0.0)) {
        double x0 = xa, x1 = xb, f0 = fa;
        for (int it = 0; it < 200 && x1 - x0 > 1e-15 * E; ++it) {
          const double xm = 0.5 * (x0 + x1), fm = f(xm);
          if ((fm < 0.0) == (f0 < 0.0)) {
            x0 = xm;
            f0 = fm;
          } else {
            x1 = xm;
          }
        }
        out.push_back({0.5 * (x0 + x1), kappa, 2 * std::abs(kappa)});
      }
      xa = xb;
      fa = fb;
    }
  }
  std::sort(out.begin(), out.end(), [](const Level& x, const Level& y) { return x.lambda < y.lambda; });
  return out;
}

std::vector<double> values(const std::vector<Level>& v) {
  std::vector<double> out;
  for (const Level& l : v) out.push_back(l.lambda);
  return out;
}

}  // namespace pw
