#pragma once

#include <optional>
#include <string>
#include <vector>

#include "shellspec/assembly.hpp"
#include "shellspec/oracles.hpp"

namespace shellspec {

struct ScanOptions {
  int n_samples = 200;
  double margin = -1.0;  // absolute; default 1e−3·mc²
  double bracket_threshold = 0.25;
  int threads = 1;
  AssemblyOptions assembly;
  // Optional sub-window of the gap.
  std::optional<double> lo, hi;
};

struct Bracket {
  double lo = 0.0;
  double hi = 0.0;
  double sample_lambda = 0.0;
  double sample_sigma = 0.0;
};

struct GapScan {
  std::vector<double> lambda;
  std::vector<double> sigma_min;
  std::vector<Bracket> brackets;
  std::vector<std::pair<double, double>> runs;  // maximal runs below threshold
};

struct RefineOptions {
  double tol_lambda = -1.0;  // default 1e−6·mc²
  double accept_tol = -1.0;  // default from default_accept_tol
  double mult_factor = 10.0;
  int probe_vectors = 16;
  AssemblyOptions assembly;
};

struct EigenResult {
  double lambda = 0.0;
  int multiplicity = 0;
  std::vector<Density> densities;
  double sigma_min = 0.0;
  Eigen::VectorXd singular_values;
  double bs_residual = 0.0;
  double accept_tol = 0.0;
};

double default_accept_tol(const SurfaceQuadrature& s, const AssemblyOptions& o);

void check_noncritical(const Coupling& cp, double c);

// rtol: relative stopping change of the inverse iteration
double sigma_min_at(double lambda, const Coupling& cp, const SurfaceCache& sc, const PhysParams& p,
                    const AssemblyOptions& o = {}, double rtol = 1e-7);

GapScan scan_gap(const Coupling& cp, const SurfaceCache& sc, const PhysParams& p, const ScanOptions& o = {});

EigenResult refine_eigenvalue(const Coupling& cp, const SurfaceCache& sc, const PhysParams& p, const Bracket& b,
                              const RefineOptions& o = {});

std::vector<EigenResult> find_eigenvalues(const Coupling& cp, const SurfaceCache& sc, const PhysParams& p,
                                          const ScanOptions& so = {}, const RefineOptions& ro = {},
                                          GapScan* scan_out = nullptr);

struct JumpResidual {
  std::vector<double> eps;
  std::vector<double> relative;  // per ε, relative sup-norm
  double extrapolated = 0.0;     // ε → 0 by linear Richardson on the two smallest ε
};

// icα·ν(f₊ − f₋) + ½(η+τβ)(f₊ + f₋) with f = Φ_λφ at probe pairs.
JumpResidual coupling_condition_residual(cplx lambda, const Coupling& cp, const SurfaceCache& sc, const Density& phi,
                                         const PhysParams& p, const std::vector<double>& eps, int node_stride = 1);

// Trace limits of Φ_λφ: mean against C_λφ and icα·ν(inner − outer) against φ.
struct JumpRelationResidual {
  JumpResidual mean;
  JumpResidual jump;
};

JumpRelationResidual jump_relation_residuals(cplx lambda, const SurfaceCache& sc, const Density& phi,
                                             const PhysParams& p, const std::vector<double>& eps,
                                             const AssemblyOptions& o = {}, int node_stride = 1);

struct SymmetryCheck {
  std::string name;
  Coupling coupling;
  std::vector<double> reference;
  std::vector<double> compared;
  double max_mismatch = 0.0;
  bool matched = false;
};

struct SymmetryReport {
  Coupling base;
  std::vector<double> base_eigenvalues;
  std::vector<int> base_multiplicities;
  std::vector<SymmetryCheck> checks;
  double tol = 0.0;
  bool all_matched = false;
  bool all_even = false;
};

SymmetryReport verify_symmetries(const Coupling& cp, const SurfaceCache& sc, const PhysParams& p,
                                 const ScanOptions& so = {}, const RefineOptions& ro = {});

// Compares two sorted sets; mismatch is infinite when sizes differ.
double set_mismatch(std::vector<double> a, std::vector<double> b);

struct PositivityReport {
  double tau = 0.0;
  std::vector<double> eigenvalues;
  int brackets = 0;
  bool empty = false;
  std::string note;
};

PositivityReport scalar_positive_tau_check(double tau, const SurfaceCache& sc, const PhysParams& p,
                                           const ScanOptions& so = {}, const RefineOptions& ro = {});

struct ResolventOptions {
  BallRule ball;
  PhiOptions phi;
  AssemblyOptions assembly;
  bool allow_critical = false;
};

// (A₀−λ)^{-1}f − Φ_λ(I + (η+τβ)C_λ)^{-1}(η+τβ)Φ*_{λ̄}f at the given points.
std::vector<Vec4C> apply_resolvent(cplx lambda, const Coupling& cp, const SurfaceCache& sc, const PhysParams& p,
                                   const SpinorField& f, const std::vector<Vec3>& points,
                                   const ResolventOptions& o = {});

// Same with a caller-supplied volume quadrature for f.
std::vector<Vec4C> apply_resolvent(cplx lambda, const Coupling& cp, const SurfaceCache& sc, const PhysParams& p,
                                   const VolumeQuadrature& vq, const std::vector<Vec4C>& samples,
                                   const std::vector<Vec3>& points, const ResolventOptions& o = {});

struct NonrelRow {
  double c = 0.0;
  double lambda_shifted = 0.0;
  double schrodinger_ref = 0.0;
  double difference = 0.0;
  std::vector<double> all_shifted;
  std::string error;
};

struct NonrelTable {
  Coupling coupling;
  bool upper = true;
  std::vector<RadialMode> schrodinger;
  std::vector<NonrelRow> rows;
  double fitted_order = 0.0;
  bool monotone = false;
};

struct NonrelOptions {
  bool upper = true;
  int n_samples = 400;
  double tol_rel = 1e-10;
  int l_max = 6;
  int threads = 1;
  AssemblyOptions assembly;
};

NonrelTable nonrel_limit_sweep(double eta, double tau, const SurfaceCache& sc, double m,
                               const std::vector<double>& c_list, const NonrelOptions& o = {});

// Least-squares slope of log|d| against log c, negated.
double fitted_order(const std::vector<double>& c, const std::vector<double>& d);

}  // namespace shellspec
