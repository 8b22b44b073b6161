#pragma once

#include <vector>

#include "shellspec/assembly.hpp"

namespace shellspec {

struct BesselPair {
  cplx j;
  cplx h;
};

// Spherical Bessel j_l and Hankel h_l⁽¹⁾.
BesselPair spherical_bessel(int l, cplx z);
// j_0..j_lmax and h_0..h_lmax; h is left empty when z = 0.
void spherical_bessel_all(int lmax, cplx z, std::vector<cplx>& j, std::vector<cplx>& h);

// i k R² j_l(kR) h_l(kR); R/(2l+1) at k = 0.
cplx sphere_single_layer_eig(cplx k, double R, int l);

// Schrödinger wavenumber √(2mλ) with Im > 0.
cplx schrodinger_k(cplx lambda, double m);

// D = 2m·S_{√(2mλ)}.
BoundaryOperator schrodinger_kernels(cplx lambda, double m, const SurfaceCache& sc, const AssemblyOptions& o = {});

struct RadialMode {
  int l = 0;
  double energy = 0.0;
  double residual = 0.0;
};

std::vector<RadialMode> schrodinger_sphere_bound_states(double eta, double m, double R, int l_max);

// Log-derivative mismatch u'_out/u_out − u'_in/u_in − 2mη at r = R.
double radial_matching(double eta, double m, double R, int l, double energy, int steps = 4000);

struct SchrodingerScan {
  std::vector<double> lambda;
  std::vector<double> sigma_min;
};

SchrodingerScan schrodinger_bs_scan(double eta, const SurfaceCache& sc, double m, const std::vector<double>& grid,
                                    const AssemblyOptions& o = {});

struct SchrodingerZero {
  double energy = 0.0;
  double sigma_min = 0.0;
  int multiplicity = 0;
};

// Zeros of σ_min(I + ηD_λ): local minima of a scan refined by golden section.
std::vector<SchrodingerZero> schrodinger_bs_zeros(double eta, const SurfaceCache& sc, double m, double lo, double hi,
                                                  int n_samples, double tol, const AssemblyOptions& o = {});

}  // namespace shellspec
