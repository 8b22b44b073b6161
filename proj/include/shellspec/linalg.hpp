#pragma once

#include <functional>

#include <Eigen/Dense>

namespace shellspec {

// W^{1/2} B W^{-1/2} with node weights repeated over `block` rows.
Eigen::MatrixXcd weighted(const Eigen::MatrixXcd& B, const Eigen::VectorXd& w, int block);

struct SmallSVD {
  Eigen::VectorXd values;  // ascending
  Eigen::MatrixXcd right;  // matching right singular vectors
};

// p smallest singular values by LU-based inverse subspace iteration
// with a Rayleigh–Ritz step through the thin SVD of M·X.
SmallSVD smallest_svd(const Eigen::MatrixXcd& M, int p, int iterations = 40, double rtol = 1e-7);
Eigen::VectorXd smallest_singular_values(const Eigen::MatrixXcd& M, int p, double rtol = 1e-7);

struct GoldenResult {
  double x;
  double f;
};

GoldenResult golden_minimize(const std::function<double(double)>& f, double a, double b, double tol);

}  // namespace shellspec
