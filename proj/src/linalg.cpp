#include "shellspec/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace shellspec {

Eigen::MatrixXcd weighted(const Eigen::MatrixXcd& B, const Eigen::VectorXd& w, int block) {
  const Eigen::Index n = w.size();
  Eigen::VectorXd sq(n * block);
  for (Eigen::Index i = 0; i < n; ++i) sq.segment(i * block, block).setConstant(std::sqrt(w(i)));
  return sq.asDiagonal() * B * sq.cwiseInverse().asDiagonal();
}

SmallSVD smallest_svd(const Eigen::MatrixXcd& M, int p, int iterations, double rtol) {
  const Eigen::Index n = M.rows();
  p = int(std::min<Eigen::Index>(p, n));
  SmallSVD out;
  if (n <= 64) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M, Eigen::ComputeFullV);
    out.values.resize(p);
    out.right.resize(n, p);
    for (int q = 0; q < p; ++q) {
      out.values(q) = svd.singularValues()(n - 1 - q);
      out.right.col(q) = svd.matrixV().col(n - 1 - q);
    }
    return out;
  }
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(M);
  // oversampled block, deterministic start
  const int b = int(std::min<Eigen::Index>(p + 8, n));
  Eigen::MatrixXcd X(n, b);
  for (Eigen::Index i = 0; i < n; ++i)
    for (int q = 0; q < b; ++q)
      X(i, q) = std::complex<double>(std::sin(1.0 + 0.7 * i + 1.3 * q * q + 0.11 * i * q), std::cos(0.3 * i + 2.1 * q));
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(X);
  X = qr.householderQ() * Eigen::MatrixXcd::Identity(n, b);
  Eigen::VectorXd prev = Eigen::VectorXd::Constant(p, -1.0);
  for (int it = 0; it < iterations; ++it) {
    // (MᴴM)^{-1} X = M^{-1} M^{-H} X
    // M^{-H} X from the LU factors
    Eigen::MatrixXcd Z = lu.matrixLU().triangularView<Eigen::Upper>().adjoint().solve(X);
    lu.matrixLU().triangularView<Eigen::UnitLower>().adjoint().solveInPlace(Z);
    const Eigen::MatrixXcd Y = lu.solve(lu.permutationP().transpose() * Z);
    Eigen::HouseholderQR<Eigen::MatrixXcd> q2(Y);
    X = q2.householderQ() * Eigen::MatrixXcd::Identity(n, b);
    // Ritz rotation keeps the smallest direction in the first column, so a
    // near-null vector cannot swamp the others in the next solve
    Eigen::JacobiSVD<Eigen::MatrixXcd> s(M * X, Eigen::ComputeThinV);
    X = X * s.matrixV().rowwise().reverse();
    const Eigen::VectorXd v = s.singularValues().reverse().head(p);
    if (((v - prev).cwiseAbs().array() <= rtol * v.array() + 1e-14).all()) break;
    prev = v;
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> s(M * X, Eigen::ComputeThinV);
  out.values = s.singularValues().reverse().head(p);
  out.right = (X * s.matrixV().rowwise().reverse()).leftCols(p);
  return out;
}

Eigen::VectorXd smallest_singular_values(const Eigen::MatrixXcd& M, int p, double rtol) {
  return smallest_svd(M, p, 40, rtol).values;
}

GoldenResult golden_minimize(const std::function<double(double)>& f, double a, double b, double tol) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return fc <= fd ? GoldenResult{c, fc} : GoldenResult{d, fd};
}

}  // namespace shellspec
