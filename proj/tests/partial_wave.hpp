#pragma once

#include <vector>

// Dirac δ-shell on a sphere decomposed by κ. Real gap only.
namespace pw {

struct Level {
  double lambda;
  int kappa;
  int multiplicity;
};

// q R² i_l(qR) k_l(qR): single layer of e^{−q r}/(4π r) on Y_lm.
double yukawa_single_layer(double q, double R, int l);
// Mean normal derivative of the same potential (adjoint double layer).
double yukawa_adjoint_double_layer(double q, double R, int l);

double det_kappa(double lambda, int kappa, double eta, double tau, double m, double c, double R);

std::vector<Level> levels(double eta, double tau, double m = 1.0, double c = 1.0, double R = 1.0, int kappa_max = 8,
                          int samples = 4000);

std::vector<double> values(const std::vector<Level>& v);

}  // namespace pw
