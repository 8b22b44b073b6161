#pragma once

#include <Eigen/Dense>
#include <vector>

namespace shellspec {

struct Rule1D {
  Eigen::VectorXd x;
  Eigen::VectorXd w;
};

// Gauss–Legendre nodes and weights on [a, b].
Rule1D gauss_legendre(int n, double a = -1.0, double b = 1.0);

// Composite Gauss–Legendre on consecutive breakpoints.
Rule1D composite_gauss(const std::vector<double>& breaks, int per_panel);

// Legendre P_0..P_lmax at x.
Eigen::VectorXd legendre_all(int lmax, double x);

}  // namespace shellspec
