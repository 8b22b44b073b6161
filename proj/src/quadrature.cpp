#include "shellspec/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace shellspec {

namespace {

Rule1D gl_reference(int n) {
  static std::mutex mu;
  static std::map<int, Rule1D> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  Rule1D r{Eigen::VectorXd(n), Eigen::VectorXd(n)};
  const double pi = 3.14159265358979323846;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it2 = 0; it2 < 100; ++it2) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.x(i) = -x;
    r.x(n - 1 - i) = x;
    r.w(i) = w;
    r.w(n - 1 - i) = w;
  }
  cache.emplace(n, r);
  return r;
}

}  // namespace

Rule1D gauss_legendre(int n, double a, double b) {
  Rule1D r = gl_reference(n);
  const double h = 0.5 * (b - a), mid = 0.5 * (a + b);
  r.x = (r.x.array() * h + mid).matrix();
  r.w *= h;
  return r;
}

Rule1D composite_gauss(const std::vector<double>& breaks, int per_panel) {
  const int np = int(breaks.size()) - 1;
  Rule1D r{Eigen::VectorXd(np * per_panel), Eigen::VectorXd(np * per_panel)};
  for (int p = 0; p < np; ++p) {
    Rule1D g = gauss_legendre(per_panel, breaks[p], breaks[p + 1]);
    r.x.segment(p * per_panel, per_panel) = g.x;
    r.w.segment(p * per_panel, per_panel) = g.w;
  }
  return r;
}

Eigen::VectorXd legendre_all(int lmax, double x) {
  Eigen::VectorXd p(lmax + 1);
  p(0) = 1.0;
  if (lmax >= 1) p(1) = x;
  for (int l = 2; l <= lmax; ++l) p(l) = ((2 * l - 1) * x * p(l - 1) - (l - 1) * p(l - 2)) / l;
  return p;
}

}  // namespace shellspec
