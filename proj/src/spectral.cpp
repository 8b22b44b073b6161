#include "shellspec/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "shellspec/linalg.hpp"

namespace shellspec {

namespace {

const cplx I1(0.0, 1.0);

void warm_cache(const SurfaceCache& sc, const AssemblyOptions& o) {
  if (resolve_scheme(sc.surface(), o) == Scheme::Spectral) {
    sc.basis();
    sc.truncation_synthesis();
  } else if (o.diagonal == DiagonalRule::Subtraction) {
    sc.self_integrals();
  }
}

template <typename F> void parallel_for(int n, int threads, F&& body) {
  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      for (int i = t; i < n; i += threads) body(i);
    });
  for (auto& th : pool) th.join();
}

Eigen::MatrixXcd weighted_bs(double lambda, const Coupling& cp, const SurfaceCache& sc, const PhysParams& p,
                             const AssemblyOptions& o) {
  return weighted(bs_matrix(lambda, cp, sc, p, o).matrix, sc.surface().weights, 4);
}

Density apply_coupling(const Coupling& cp, const Density& v) {
  Density out = v;
  for (Eigen::Index i = 0; i < v.size() / 4; ++i) {
    out.segment<2>(4 * i) *= (cp.eta + cp.tau);
    out.segment<2>(4 * i + 2) *= (cp.eta - cp.tau);
  }
  return out;
}

}  // namespace

double default_accept_tol(const SurfaceQuadrature& s, const AssemblyOptions& o) {
  if (resolve_scheme(s, o) == Scheme::Spectral) return 1e-4;
  return std::max(1e-3, 0.5 * s.h * s.h);
}

void check_noncritical(const Coupling& cp, double c) {
  if (classify(cp.eta, cp.tau, c) == CouplingClass::Critical)
    throw Error(ErrorKind::CriticalCoupling,
                "critical case eta^2 - tau^2 = 4c^2: the shell operator is not covered by the L2 boundary-integral "
                "method (eta=" + std::to_string(cp.eta) + ", tau=" + std::to_string(cp.tau) + ")");
}

double sigma_min_at(double lambda, const Coupling& cp, const SurfaceCache& sc, const PhysParams& p,
                    const AssemblyOptions& o, double rtol) {
  return smallest_singular_values(weighted_bs(lambda, cp, sc, p, o), 1, rtol)(0);
}

GapScan scan_gap(const Coupling& cp, const SurfaceCache& sc, const PhysParams& p, const ScanOptions& o) {
  check_noncritical(cp, p.c);
  const double mc2 = p.rest_energy();
  const double margin = o.margin > 0.0 ? o.margin : 1e-3 * mc2;
  const double lo = std::max(o.lo.value_or(-mc2), -mc2 + margin);
  const double hi = std::min(o.hi.value_or(mc2), mc2 - margin);
  if (!(lo < hi) || o.n_samples < 3) throw Error(ErrorKind::ConfigError, "empty scan window");
  GapScan g;
  g.lambda.resize(size_t(o.n_samples));
  g.sigma_min.resize(size_t(o.n_samples));
  for (int i = 0; i < o.n_samples; ++i) g.lambda[size_t(i)] = lo + (hi - lo) * i / (o.n_samples - 1);
  warm_cache(sc, o.assembly);
  parallel_for(o.n_samples, o.threads, [&](int i) {
    g.sigma_min[size_t(i)] = sigma_min_at(g.lambda[size_t(i)], cp, sc, p, o.assembly, 1e-4);
  });
  const auto& s = g.sigma_min;
  for (int i = 1; i + 1 < o.n_samples; ++i)
    if (s[size_t(i)] < o.bracket_threshold && s[size_t(i)] < s[size_t(i - 1)] && s[size_t(i)] <= s[size_t(i + 1)])
      g.brackets.push_back({g.lambda[size_t(i - 1)], g.lambda[size_t(i + 1)], g.lambda[size_t(i)], s[size_t(i)]});
  for (int i = 0; i < o.n_samples;) {
    if (s[size_t(i)] < o.bracket_threshold) {
      int j = i;
      while (j + 1 < o.n_samples && s[size_t(j + 1)] < o.bracket_threshold) ++j;
      g.runs.emplace_back(g.lambda[size_t(i)], g.lambda[size_t(j)]);
      i = j + 1;
    } else {
      ++i;
    }
  }
  return g;
}

EigenResult refine_eigenvalue(const Coupling& cp, const SurfaceCache& sc, const PhysParams& p, const Bracket& b,
                              const RefineOptions& o) {
  check_noncritical(cp, p.c);
  const double tol = o.tol_lambda > 0.0 ? o.tol_lambda : 1e-6 * p.rest_energy();
  const double acc = o.accept_tol > 0.0 ? o.accept_tol : default_accept_tol(sc.surface(), o.assembly);
  warm_cache(sc, o.assembly);
  auto f = [&](double l) { return sigma_min_at(l, cp, sc, p, o.assembly); };
  const GoldenResult gm = golden_minimize(f, b.lo, b.hi, tol);
  if (!(gm.f <= acc))
    throw Error(ErrorKind::NoEigenvalueInBracket, "sigma_min = " + std::to_string(gm.f) + " above accept_tol = " +
                                                      std::to_string(acc) + " near lambda = " + std::to_string(gm.x));
  const BoundaryOperator B = bs_matrix(gm.x, cp, sc, p, o.assembly);
  const Eigen::MatrixXcd Bw = weighted(B.matrix, sc.surface().weights, 4);
  const double thr = o.mult_factor * acc;
  int pv = o.probe_vectors;
  SmallSVD sv;
  for (;;) {
    sv = smallest_svd(Bw, pv, 30);
    if (sv.values(sv.values.size() - 1) > thr || pv >= Bw.rows()) break;
    pv *= 2;
  }
  EigenResult r;
  r.lambda = gm.x;
  r.sigma_min = sv.values(0);
  r.singular_values = sv.values;
  r.accept_tol = acc;
  const Eigen::VectorXd& w = sc.surface().weights;
  Eigen::VectorXd isq(4 * w.size()), sq(4 * w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    sq.segment<4>(4 * i).setConstant(std::sqrt(w(i)));
    isq.segment<4>(4 * i).setConstant(1.0 / std::sqrt(w(i)));
  }
  for (Eigen::Index q = 0; q < sv.values.size(); ++q) {
    if (sv.values(q) > thr) break;
    ++r.multiplicity;
    r.densities.push_back(isq.asDiagonal() * sv.right.col(q));
  }
  const Density& phi0 = r.densities.front();
  r.bs_residual = (sq.asDiagonal() * (B.matrix * phi0)).norm() / (sq.asDiagonal() * phi0).norm();
  return r;
}

std::vector<EigenResult> find_eigenvalues(const Coupling& cp, const SurfaceCache& sc, const PhysParams& p,
                                          const ScanOptions& so, const RefineOptions& ro, GapScan* scan_out) {
  GapScan g = scan_gap(cp, sc, p, so);
  std::vector<EigenResult> out;
  for (const Bracket& b : g.brackets) {
    try {
      out.push_back(refine_eigenvalue(cp, sc, p, b, ro));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NoEigenvalueInBracket) throw;
    }
  }
  if (scan_out) *scan_out = std::move(g);
  return out;
}

namespace {

JumpResidual finish_residual(const std::vector<double>& eps, const std::vector<std::vector<Vec4C>>& res, double scale) {
  JumpResidual jr;
  jr.eps = eps;
  for (const auto& r : res) {
    double sup = 0.0;
    for (const Vec4C& v : r) sup = std::max(sup, v.norm());
    jr.relative.push_back(sup / scale);
  }
  std::vector<size_t> order(eps.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return eps[a] < eps[b]; });
  if (eps.size() < 2) {
    jr.extrapolated = jr.relative.front();
    return jr;
  }
  const size_t a = order[0], b = order[1];
  const double t = eps[a] / (eps[b] - eps[a]);
  double sup = 0.0;
  for (size_t q = 0; q < res[a].size(); ++q) sup = std::max(sup, (res[a][q] + t * (res[a][q] - res[b][q])).norm());
  jr.extrapolated = sup / scale;
  return jr;
}

}  // namespace

JumpRelationResidual jump_relation_residuals(cplx lambda, const SurfaceCache& sc, const Density& phi,
                                             const PhysParams& p, const std::vector<double>& eps,
                                             const AssemblyOptions& o, int node_stride) {
  const SurfaceQuadrature& s = sc.surface();
  const Density cphi = assemble_C(lambda, sc, p, o).matrix * phi;
  std::vector<Eigen::Index> nodes;
  for (Eigen::Index i = 0; i < s.size(); i += node_stride) nodes.push_back(i);
  double sc_mean = 0.0, sc_jump = 0.0;
  for (Eigen::Index i : nodes) {
    sc_mean = std::max(sc_mean, cphi.segment<4>(4 * i).norm());
    sc_jump = std::max(sc_jump, phi.segment<4>(4 * i).norm());
  }
  std::vector<std::vector<Vec4C>> rm(eps.size()), rj(eps.size());
  for (size_t e = 0; e < eps.size(); ++e) {
    std::vector<Vec3> pts;
    for (Eigen::Index i : nodes) {
      pts.push_back(s.node(i) - eps[e] * s.normal(i));
      pts.push_back(s.node(i) + eps[e] * s.normal(i));
    }
    const std::vector<Vec4C> f = apply_phi(lambda, sc, phi, pts, p);
    for (size_t q = 0; q < nodes.size(); ++q) {
      const Eigen::Index i = nodes[q];
      const Vec4C& fp = f[2 * q];
      const Vec4C& fm = f[2 * q + 1];
      rm[e].push_back(0.5 * (fp + fm) - cphi.segment<4>(4 * i));
      rj[e].push_back(I1 * p.c * alpha_dot(s.normal(i)) * (fp - fm) - phi.segment<4>(4 * i));
    }
  }
  return {finish_residual(eps, rm, sc_mean), finish_residual(eps, rj, sc_jump)};
}

JumpResidual coupling_condition_residual(cplx lambda, const Coupling& cp, const SurfaceCache& sc, const Density& phi,
                                         const PhysParams& p, const std::vector<double>& eps, int node_stride) {
  const SurfaceQuadrature& s = sc.surface();
  const Mat4C V = coupling_matrix(cp);
  std::vector<Eigen::Index> nodes;
  for (Eigen::Index i = 0; i < s.size(); i += node_stride) nodes.push_back(i);
  std::vector<std::vector<Vec4C>> res(eps.size());
  double scale = 0.0;
  for (size_t e = 0; e < eps.size(); ++e) {
    std::vector<Vec3> pts;
    for (Eigen::Index i : nodes) {
      pts.push_back(s.node(i) - eps[e] * s.normal(i));
      pts.push_back(s.node(i) + eps[e] * s.normal(i));
    }
    const std::vector<Vec4C> f = apply_phi(lambda, sc, phi, pts, p);
    for (size_t q = 0; q < nodes.size(); ++q) {
      const Vec4C& fp = f[2 * q];
      const Vec4C& fm = f[2 * q + 1];
      const Vec4C jump = I1 * p.c * alpha_dot(s.normal(nodes[q])) * (fp - fm);
      res[e].push_back(jump + 0.5 * V * (fp + fm));
      scale = std::max(scale, jump.norm());
    }
  }
  return finish_residual(eps, res, scale);
}

double set_mismatch(std::vector<double> a, std::vector<double> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double m = 0.0;
  for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

SymmetryReport verify_symmetries(const Coupling& cp, const SurfaceCache& sc, const PhysParams& p,
                                 const ScanOptions& so, const RefineOptions& ro) {
  SymmetryReport rep;
  rep.base = cp;
  rep.tol = 2.0 * (ro.tol_lambda > 0.0 ? ro.tol_lambda : 1e-6 * p.rest_energy());
  auto eigs = [&](const Coupling& c, std::vector<int>* mult) {
    std::vector<double> v;
    for (const EigenResult& r : find_eigenvalues(c, sc, p, so, ro)) {
      v.push_back(r.lambda);
      if (mult) mult->push_back(r.multiplicity);
    }
    return v;
  };
  rep.base_eigenvalues = eigs(cp, &rep.base_multiplicities);
  std::vector<int> mults = rep.base_multiplicities;
  auto add = [&](const std::string& name, const Coupling& c, std::vector<double> ref, std::vector<double> cmp) {
    SymmetryCheck chk{name, c, std::move(ref), std::move(cmp), 0.0, false};
    chk.max_mismatch = set_mismatch(chk.reference, chk.compared);
    chk.matched = chk.max_mismatch <= rep.tol;
    rep.checks.push_back(std::move(chk));
  };
  if (std::abs(cp.eta * cp.eta - cp.tau * cp.tau) > 0.0) {
    const Coupling mc = symmetry_map(cp, p.c);
    std::vector<int> mm;
    add("coupling_map", mc, rep.base_eigenvalues, eigs(mc, &mm));
    mults.insert(mults.end(), mm.begin(), mm.end());
  }
  {
    const Coupling neg = make_coupling(-cp.eta, cp.tau, p.c);
    std::vector<int> mm;
    std::vector<double> e = eigs(neg, &mm);
    for (double& x : e) x = -x;
    add("mirror_eta", neg, rep.base_eigenvalues, e);
    mults.insert(mults.end(), mm.begin(), mm.end());
  }
  if (cp.eta == 0.0) {
    std::vector<double> e = rep.base_eigenvalues;
    for (double& x : e) x = -x;
    add("self_mirror", cp, rep.base_eigenvalues, e);
  }
  rep.all_matched = std::all_of(rep.checks.begin(), rep.checks.end(), [](const SymmetryCheck& c) { return c.matched; });
  rep.all_even = std::all_of(mults.begin(), mults.end(), [](int m) { return m % 2 == 0; });
  return rep;
}

PositivityReport scalar_positive_tau_check(double tau, const SurfaceCache& sc, const PhysParams& p,
                                           const ScanOptions& so, const RefineOptions& ro) {
  if (tau < 0.0) throw Error(ErrorKind::ConfigError, "tau must be non-negative");
  PositivityReport rep;
  rep.tau = tau;
  GapScan g;
  for (const EigenResult& r : find_eigenvalues(make_coupling(0.0, tau, p.c), sc, p, so, ro, &g))
    rep.eigenvalues.push_back(r.lambda);
  rep.brackets = int(g.brackets.size());
  rep.empty = rep.eigenvalues.empty();
  rep.note = "statement assumes a C^4 surface; sphere and spheroid grids are smooth, triangle meshes are not";
  return rep;
}

namespace {

std::vector<Vec4C> resolvent_from_free(cplx lambda, const Coupling& cp, const SurfaceCache& sc, const PhysParams& p,
                                       const Density& free_on_nodes, std::vector<Vec4C> free_at_points,
                                       const std::vector<Vec3>& points, const ResolventOptions& o) {
  const BoundaryOperator B = bs_matrix(lambda, cp, sc, p, o.assembly);
  const Density psi = B.matrix.partialPivLu().solve(apply_coupling(cp, free_on_nodes));
  const std::vector<Vec4C> corr = apply_phi(lambda, sc, psi, points, p, o.phi);
  for (size_t i = 0; i < points.size(); ++i) free_at_points[i] -= corr[i];
  return free_at_points;
}

void check_resolvent_args(cplx lambda, const Coupling& cp, const PhysParams& p, const ResolventOptions& o) {
  if (lambda.imag() == 0.0) throw Error(ErrorKind::RealLambda, "the Krein formula is applied for nonreal lambda only");
  if (!o.allow_critical) check_noncritical(cp, p.c);
}

}  // namespace

std::vector<Vec4C> apply_resolvent(cplx lambda, const Coupling& cp, const SurfaceCache& sc, const PhysParams& p,
                                   const SpinorField& f, const std::vector<Vec3>& points, const ResolventOptions& o) {
  check_resolvent_args(lambda, cp, p, o);
  const SurfaceQuadrature& s = sc.surface();
  std::vector<Vec3> nodes(static_cast<size_t>(s.size()));
  for (Eigen::Index i = 0; i < s.size(); ++i) nodes[size_t(i)] = s.node(i);
  const std::vector<Vec4C> fn = free_resolvent(lambda, f, nodes, p, o.ball);
  Density dn(4 * s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) dn.segment<4>(4 * i) = fn[size_t(i)];
  return resolvent_from_free(lambda, cp, sc, p, dn, free_resolvent(lambda, f, points, p, o.ball), points, o);
}

std::vector<Vec4C> apply_resolvent(cplx lambda, const Coupling& cp, const SurfaceCache& sc, const PhysParams& p,
                                   const VolumeQuadrature& vq, const std::vector<Vec4C>& samples,
                                   const std::vector<Vec3>& points, const ResolventOptions& o) {
  check_resolvent_args(lambda, cp, p, o);
  // Φ*_{λ̄} f = ((A₀ − λ)^{-1} f)|_Σ
  const Density dn = apply_phi_star(std::conj(lambda), sc.surface(), vq, samples, p);
  const cplx k = momentum_k(lambda, p);
  std::vector<Vec4C> fp;
  for (const Vec3& x : points) {
    Vec4C acc = Vec4C::Zero();
    for (Eigen::Index q = 0; q < vq.nodes.rows(); ++q) {
      const Vec3 d = x - vq.nodes.row(q).transpose();
      if (d.norm() == 0.0) throw Error(ErrorKind::VolumeNodeOnSurface, "evaluation point coincides with a volume node");
      acc += green_function_k(lambda, k, d, p) * samples[size_t(q)] * vq.weights(q);
    }
    fp.push_back(acc);
  }
  return resolvent_from_free(lambda, cp, sc, p, dn, std::move(fp), points, o);
}

double fitted_order(const std::vector<double>& c, const std::vector<double>& d) {
  const size_t n = c.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    const double x = std::log(c[i]), y = std::log(std::abs(d[i]));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return -slope;
}

NonrelTable nonrel_limit_sweep(double eta, double tau, const SurfaceCache& sc, double m,
                               const std::vector<double>& c_list, const NonrelOptions& o) {
  if (eta != 0.0 && tau != 0.0)
    throw Error(ErrorKind::MixedCoupling, "the nonrelativistic limit is available for pure couplings only");
  NonrelTable t;
  t.upper = o.upper;
  const SurfaceQuadrature& s = sc.surface();
  // strength seen by the Schrödinger limit on the chosen branch
  const double g = tau != 0.0 ? tau : (o.upper ? eta : -eta);
  const double sign = o.upper ? 1.0 : -1.0;
  if (g < 0.0) {
    if (s.kind == SurfaceKind::SphereGrid) {
      t.schrodinger = schrodinger_sphere_bound_states(g, m, s.a, o.l_max);
    } else {
      const double lo = -50.0 * m * g * g;
      for (const SchrodingerZero& z : schrodinger_bs_zeros(g, sc, m, lo, -1e-8, 400, 1e-10 * std::abs(lo), o.assembly))
        t.schrodinger.push_back({-1, z.energy, z.sigma_min});
    }
  }
  double emin = -50.0 * m * g * g;
  if (!t.schrodinger.empty()) {
    emin = 0.0;
    for (const RadialMode& r : t.schrodinger) emin = std::min(emin, r.energy);
  }
  std::vector<double> cs, ds;
  for (double c : c_list) {
    NonrelRow row;
    row.c = c;
    try {
      const PhysParams p(m, c);
      t.coupling = make_coupling(eta, tau, c);
      const double mc2 = p.rest_energy();
      ScanOptions so;
      so.n_samples = o.n_samples;
      so.threads = o.threads;
      so.assembly = o.assembly;
      so.margin = std::max(1e-3 * std::abs(emin), 1e-12 * mc2);
      const double span = std::min(1.5 * std::abs(emin), 2.0 * mc2);
      if (o.upper) so.lo = mc2 - span;
      else so.hi = -mc2 + span;
      RefineOptions ro;
      ro.tol_lambda = o.tol_rel * mc2;
      ro.assembly = o.assembly;
      const std::vector<EigenResult> ev = find_eigenvalues(t.coupling, sc, p, so, ro);
      for (const EigenResult& r : ev) row.all_shifted.push_back(r.lambda - sign * mc2);
      if (row.all_shifted.empty() || t.schrodinger.empty())
        throw Error(ErrorKind::NoEigenvalue, "no eigenvalue near the threshold at c = " + std::to_string(c));
      // ground state: deepest level relative to the threshold
      row.lambda_shifted = o.upper ? *std::min_element(row.all_shifted.begin(), row.all_shifted.end())
                                   : *std::max_element(row.all_shifted.begin(), row.all_shifted.end());
      row.schrodinger_ref = sign * emin;
      row.difference = row.lambda_shifted - row.schrodinger_ref;
      cs.push_back(c);
      ds.push_back(row.difference);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::MixedCoupling) throw;
      row.error = e.what();
    }
    t.rows.push_back(row);
  }
  if (cs.size() >= 2) {
    t.fitted_order = fitted_order(cs, ds);
    t.monotone = true;
    for (size_t i = 1; i < ds.size(); ++i)
      if (!(std::abs(ds[i]) < std::abs(ds[i - 1]))) t.monotone = false;
  }
  if (t.coupling.eta == 0.0 && t.coupling.tau == 0.0) t.coupling = Coupling{};
  return t;
}

}  // namespace shellspec
