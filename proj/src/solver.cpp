#include "rtv/solver.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rtv/energy.hpp"
#include "rtv/operators.hpp"
#include "rtv/parallel.hpp"

namespace rtv {

FacetMask FacetMask::from_pixels(const PixelMask& marked) {
  FacetMask m(marked.n1, marked.n2);
  for (int j = 0; j + 1 < marked.n2; ++j)
    for (int i = 0; i < marked.n1; ++i) m.s1[std::size_t(j) * m.n1 + i] = marked(i, j) && marked(i, j + 1);
  for (int j = 0; j < marked.n2; ++j)
    for (int i = 0; i + 1 < marked.n1; ++i) m.s2[std::size_t(j) * (m.n1 - 1) + i] = marked(i, j) && marked(i + 1, j);
  return m;
}

FacetMask FacetMask::border(int n1, int n2) {
  if (n1 < 2 || n2 < 2) throw ShapeError("border mask needs at least 2x2 pixels");
  FacetMask m(n1, n2);
  for (int j = 0; j + 1 < n2; ++j) m.s1[std::size_t(j) * n1] = m.s1[std::size_t(j) * n1 + n1 - 1] = 1;
  for (int i = 0; i + 1 < n1; ++i) m.s2[i] = m.s2[std::size_t(n2 - 1) * (n1 - 1) + i] = 1;
  return m;
}

FacetMask& FacetMask::merge(const FacetMask& other) {
  if (other.n1 != n1 || other.n2 != n2) throw ShapeError("facet masks differ in size");
  for (std::size_t f = 0; f < s1.size(); ++f) s1[f] = s1[f] || other.s1[f];
  for (std::size_t f = 0; f < s2.size(); ++f) s2[f] = s2[f] || other.s2[f];
  return *this;
}

std::size_t FacetMask::count() const {
  std::size_t c = 0;
  for (auto v : s1) c += v != 0;
  for (auto v : s2) c += v != 0;
  return c;
}

void SolverConfig::validate() const {
  if (max_iters < 0) throw std::invalid_argument("max_iters must be >= 0");
  if (check_every < 1) throw std::invalid_argument("check_every must be >= 1");
  if (!(tol_div > 0.0) || !(tol_consistency > 0.0)) throw std::invalid_argument("tolerances must be > 0");
  if (!(energy_rtol >= 0.0)) throw std::invalid_argument("energy_rtol must be >= 0");
  if (!(overrelax > 0.0 && overrelax <= 1.0)) throw std::invalid_argument("overrelax must lie in (0, 1]");
  if (!(precond_power >= 0.0 && precond_power <= 2.0)) throw std::invalid_argument("precond_power must lie in [0, 2]");
  if (!(step_balance > 0.0 && std::isfinite(step_balance))) throw std::invalid_argument("step_balance must be > 0");
}

Preconditioners assemble_preconditioners(const GridSpec& g, double a, double balance) {
  const double b = 2.0 - a;
  const double ix = 1.0 / g.dx, it = 1.0 / g.dtheta;
  auto inv = [](double s) { return s > 0.0 ? 1.0 / s : 0.0; };
  Preconditioners p;

  p.tau_s1.resize(g.s1_count());
  p.tau_s2.resize(g.s2_count());
  p.tau_st.assign(g.st_count(), inv(2.0 * std::pow(0.5, b) + 2.0 * std::pow(it, b)));
  p.tau_u.resize(g.pixel_count());
  const double per_volume = std::pow(0.5, b) + std::pow(ix, b);
  const double proj = std::pow(g.dtheta, b);
  for (int k = 0; k < g.ntheta; ++k) {
    for (int j = 0; j < g.n2 - 1; ++j)
      for (int i = 0; i < g.n1; ++i)
        p.tau_s1[g.s1(i, j, k)] = inv(((i > 0) + (i < g.n1 - 1)) * per_volume + proj);
    for (int j = 0; j < g.n2; ++j)
      for (int i = 0; i < g.n1 - 1; ++i)
        p.tau_s2[g.s2(i, j, k)] = inv(((j > 0) + (j < g.n2 - 1)) * per_volume + proj);
  }
  for (int j = 0; j < g.n2; ++j)
    for (int i = 0; i < g.n1; ++i) {
      const int edges = (i > 0) + (i < g.n1 - 1) + (j > 0) + (j < g.n2 - 1);
      p.tau_u[g.pixel(i, j)] = inv(edges * std::pow(ix, b));
    }

  p.sig_phi.assign(g.volume_count(), inv(4.0 * std::pow(ix, a) + 2.0 * std::pow(it, a)));
  p.sig_xi.assign(g.volume_count(), inv(2.0 * std::pow(0.5, a)));
  const double psi_row = inv(g.ntheta * std::pow(g.dtheta, a) + 2.0 * std::pow(ix, a));
  p.sig_psi1.assign(g.e1_count(), psi_row);
  p.sig_psi2.assign(g.e2_count(), psi_row);
  if (balance != 1.0) {
    for (auto* v : {&p.tau_s1, &p.tau_s2, &p.tau_st, &p.tau_u})
      for (double& x : *v) x *= balance;
    for (auto* v : {&p.sig_phi, &p.sig_xi, &p.sig_psi1, &p.sig_psi2})
      for (double& x : *v) x /= balance;
  }
  return p;
}

SolverState initial_state(const GridSpec& g, const Image& u0) {
  check_shape(u0, g, "initial_state");
  SolverState s;
  s.u = u0;
  s.u_bar = u0;
  s.sigma = FluxField(g);
  s.sigma_bar = FluxField(g);
  s.phi = VolumeField(g);
  s.xi = AveragedField(g);
  s.psi = EdgeField(g);
  return s;
}

IterationGaps iterate(SolverState& st, const Preconditioners& pre, const GridSpec& g, const CurvatureModel& model,
                      const DataTerm& term, const SolverConfig& config, bool measure) {
  const int n1 = g.n1, n2 = g.n2, nt = g.ntheta, ni = n1 - 1, nj = n2 - 1;
  const double ix = 1.0 / g.dx, it = 1.0 / g.dtheta, dth = g.dtheta;
  const double theta = config.overrelax;
  const FacetMask* mask = config.field_mask ? &*config.field_mask : nullptr;
  if (mask && (mask->n1 != n1 || mask->n2 != n2)) throw ShapeError("field mask does not match the grid");

  std::vector<double> cs(nt), sn(nt);
  for (int k = 0; k < nt; ++k) {
    cs[k] = std::cos(g.theta(k));
    sn[k] = std::sin(g.theta(k));
  }

  const double* b1 = st.sigma_bar.s1.data();
  const double* b2 = st.sigma_bar.s2.data();
  const double* bt = st.sigma_bar.st.data();
  double dual_sq = 0.0, primal_sq = 0.0;

  // Dual step on phi and xi, one volume at a time.
  RTV_OMP(parallel for collapse(2) schedule(static) reduction(+ : dual_sq))
  for (int k = 0; k < nt; ++k) {
    for (int j = 0; j < nj; ++j) {
      const int kn = g.next_k(k);
      const double* s1 = b1 + g.s1(0, j, k);
      const double* s2lo = b2 + g.s2(0, j, k);
      const double* s2hi = b2 + g.s2(0, j + 1, k);
      const double* tlo = bt + g.st(0, j, k);
      const double* thi = bt + g.st(0, j, kn);
      const std::size_t v0 = g.volume(0, j, k);
      for (int i = 0; i < ni; ++i) {
        const std::size_t v = v0 + i;
        const double div = (s1[i + 1] - s1[i]) * ix + (s2hi[i] - s2lo[i]) * ix + (thi[i] - tlo[i]) * it;
        const double phi = st.phi.values[v] + pre.sig_phi[v] * div;
        const double sx = pre.sig_xi[v];
        const Vec3& old = st.xi.values[v];
        const Vec3 eta{old[0] + sx * 0.5 * (s1[i] + s1[i + 1]), old[1] + sx * 0.5 * (s2lo[i] + s2hi[i]),
                       old[2] + sx * 0.5 * (tlo[i] + thi[i])};
        const Vec3 xi = project_H(model, cs[k], sn[k], eta);
        if (measure) {
          const double dp = phi - st.phi.values[v];
          dual_sq += dp * dp + (xi[0] - old[0]) * (xi[0] - old[0]) + (xi[1] - old[1]) * (xi[1] - old[1]) +
                     (xi[2] - old[2]) * (xi[2] - old[2]);
        }
        st.phi.values[v] = phi;
        st.xi.values[v] = xi;
      }
    }
  }

  // Dual step on psi: P sigma_bar - G u_bar on every edge.
  RTV_OMP(parallel for schedule(static) reduction(+ : dual_sq))
  for (int j = 0; j < nj; ++j) {
    std::vector<double> acc(n1, 0.0);
    for (int k = 0; k < nt; ++k) {
      const double* s = b1 + g.s1(0, j, k);
      for (int i = 0; i < n1; ++i) acc[i] += s[i];
    }
    for (int i = 0; i < n1; ++i) {
      const std::size_t e = g.e1(i, j);
      const double grad = (st.u_bar(i, j + 1) - st.u_bar(i, j)) * ix;
      const double d = pre.sig_psi1[e] * (dth * acc[i] - grad);
      if (measure) dual_sq += d * d;
      st.psi.e1[e] += d;
    }
  }
  RTV_OMP(parallel for schedule(static) reduction(+ : dual_sq))
  for (int j = 0; j < n2; ++j) {
    std::vector<double> acc(ni, 0.0);
    for (int k = 0; k < nt; ++k) {
      const double* s = b2 + g.s2(0, j, k);
      for (int i = 0; i < ni; ++i) acc[i] += s[i];
    }
    for (int i = 0; i < ni; ++i) {
      const std::size_t e = g.e2(i, j);
      const double grad = -(st.u_bar(i + 1, j) - st.u_bar(i, j)) * ix;
      const double d = pre.sig_psi2[e] * (dth * acc[i] - grad);
      if (measure) dual_sq += d * d;
      st.psi.e2[e] += d;
    }
  }

  // Stores x_new and its extrapolation; returns the squared change.
  auto relax = [theta](double& x, double& xbar, double x_new) {
    const double d = x_new - x;
    xbar = x_new + theta * d;
    x = x_new;
    return d * d;
  };

  // Primal step on sigma: gradient D* phi + P* psi + A* xi per facet.
  const std::vector<double>& phi = st.phi.values;
  const std::vector<Vec3>& xi = st.xi.values;
  RTV_OMP(parallel for collapse(2) schedule(static) reduction(+ : primal_sq))
  for (int k = 0; k < nt; ++k) {
    for (int j = 0; j < nj; ++j) {
      const std::size_t v0 = g.volume(0, j, k);
      const std::size_t f0 = g.s1(0, j, k);
      for (int i = 0; i < n1; ++i) {
        const std::size_t f = f0 + i;
        double grad = dth * st.psi.e1[g.e1(i, j)];
        if (i > 0) grad += phi[v0 + i - 1] * ix + 0.5 * xi[v0 + i - 1][0];
        if (i < ni) grad += -phi[v0 + i] * ix + 0.5 * xi[v0 + i][0];
        const bool pinned = mask && mask->s1[g.e1(i, j)];
        primal_sq += relax(st.sigma.s1[f], st.sigma_bar.s1[f], pinned ? 0.0 : st.sigma.s1[f] - pre.tau_s1[f] * grad);
      }
    }
  }
  RTV_OMP(parallel for collapse(2) schedule(static) reduction(+ : primal_sq))
  for (int k = 0; k < nt; ++k) {
    for (int j = 0; j < n2; ++j) {
      const std::size_t f0 = g.s2(0, j, k);
      for (int i = 0; i < ni; ++i) {
        const std::size_t f = f0 + i;
        double grad = dth * st.psi.e2[g.e2(i, j)];
        if (j > 0) {
          const std::size_t v = g.volume(i, j - 1, k);
          grad += phi[v] * ix + 0.5 * xi[v][1];
        }
        if (j < nj) {
          const std::size_t v = g.volume(i, j, k);
          grad += -phi[v] * ix + 0.5 * xi[v][1];
        }
        const bool pinned = mask && mask->s2[g.e2(i, j)];
        primal_sq += relax(st.sigma.s2[f], st.sigma_bar.s2[f], pinned ? 0.0 : st.sigma.s2[f] - pre.tau_s2[f] * grad);
      }
    }
  }
  RTV_OMP(parallel for collapse(2) schedule(static) reduction(+ : primal_sq))
  for (int k = 0; k < nt; ++k) {
    for (int j = 0; j < nj; ++j) {
      const std::size_t vk = g.volume(0, j, k);
      const std::size_t vp = g.volume(0, j, g.prev_k(k));
      for (int i = 0; i < ni; ++i) {
        const std::size_t f = vk + i;
        const double grad = (phi[vp + i] - phi[vk + i]) * it + 0.5 * (xi[vp + i][2] + xi[vk + i][2]);
        primal_sq += relax(st.sigma.st[f], st.sigma_bar.st[f], st.sigma.st[f] - pre.tau_st[f] * grad);
      }
    }
  }

  // Primal step on u: prox of the data term at u + tau G* psi.
  RTV_OMP(parallel for schedule(static) reduction(+ : primal_sq))
  for (int j = 0; j < n2; ++j) {
    for (int i = 0; i < n1; ++i) {
      double v = 0.0;
      if (j > 0) v += st.psi.e1[g.e1(i, j - 1)];
      if (j < nj) v -= st.psi.e1[g.e1(i, j)];
      if (i > 0) v -= st.psi.e2[g.e2(i - 1, j)];
      if (i < ni) v += st.psi.e2[g.e2(i, j)];
      const std::size_t p = g.pixel(i, j);
      const double tau = pre.tau_u[p];
      primal_sq += relax(st.u.values[p], st.u_bar.values[p], term.prox_pixel(p, st.u.values[p] + tau * v * ix, tau));
    }
  }

  ++st.iteration;
  return {primal_sq, dual_sq};
}

std::string ConvergenceReport::to_csv() const {
  std::ostringstream out;
  out << "iter,energy,div_res,cons_res\n";
  char line[160];
  for (const ReportRow& r : rows) {
    std::snprintf(line, sizeof line, "%ld,%.12g,%.6e,%.6e\n", r.iter, r.energy, r.div_res, r.cons_res);
    out << line;
  }
  return out.str();
}

void ConvergenceReport::write_csv(const std::string& path) const {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open report file '" + path + "'");
  f << to_csv();
  if (!f) throw std::runtime_error("failed writing report file '" + path + "'");
}

namespace {

double max_dual_violation(const AveragedField& xi, const CurvatureModel& model) {
  const GridSpec& g = xi.grid;
  const std::size_t per_slab = std::size_t(g.n1 - 1) * (g.n2 - 1);
  double worst = 0.0;
  for (int k = 0; k < g.ntheta; ++k) {
    const double c = std::cos(g.theta(k)), s = std::sin(g.theta(k));
    for (std::size_t j = k * per_slab; j < (k + 1) * per_slab; ++j) {
      const Vec3& p = xi.values[j];
      worst = std::max(worst, profile_violation(model, {p[0] * c + p[1] * s, p[2]}));
    }
  }
  return worst;
}

double edge_residual(const EdgeField& a, const EdgeField& b) {
  double r = 0.0;
  for (std::size_t e = 0; e < a.e1.size(); ++e) r = std::max(r, std::abs(a.e1[e] - b.e1[e]));
  for (std::size_t e = 0; e < a.e2.size(); ++e) r = std::max(r, std::abs(a.e2[e] - b.e2[e]));
  return r;
}

struct Measurement {
  ReportRow row;
  double stagnation_value;  // energy, or the Lagrangian term while the energy is infinite
  bool finite_energy;
};

Measurement measure(const SolverState& st, const GridSpec& g, const CurvatureModel& model, IterationGaps gaps) {
  Measurement m;
  ReportRow& r = m.row;
  r.iter = st.iteration;
  const AveragedField sh = apply_averaging(st.sigma, g);
  r.energy = lifted_energy(sh, model);
  r.misalignment = misalignment_norm(sh);
  r.div_res = norm_inf(apply_divergence(st.sigma, g).values);
  r.cons_res = edge_residual(apply_projection(st.sigma, g), apply_gradient(st.u, g));
  r.primal_gap = std::sqrt(gaps.primal);
  r.dual_gap = std::sqrt(gaps.dual);
  r.dual_violation = max_dual_violation(st.xi, model);
  m.finite_energy = std::isfinite(r.energy);
  if (m.finite_energy) {
    m.stagnation_value = r.energy;
  } else {
    m.stagnation_value = g.dx * g.dx * g.dtheta * inner(st.xi, sh);
  }
  return m;
}

}  // namespace

SolveResult solve(const Image& u0, const GridSpec& g, const CurvatureModel& model, const DataTerm& term,
                  const SolverConfig& config) {
  config.validate();
  if (term.n1() != g.n1 || term.n2() != g.n2) throw ShapeError("data term does not match the grid");
  SolveResult res;
  res.state = initial_state(g, u0);
  const Preconditioners pre = assemble_preconditioners(g, config.precond_power, config.step_balance);

  Measurement prev = measure(res.state, g, model, {});
  res.report.rows.push_back(prev.row);
  int stagnant_checks = 0;
  for (long n = 1; n <= config.max_iters; ++n) {
    const bool check = n % config.check_every == 0 || n == config.max_iters;
    const IterationGaps gaps = iterate(res.state, pre, g, model, term, config, check);
    if (!check) continue;
    if (!std::isfinite(gaps.primal) || !std::isfinite(gaps.dual))
      throw SolverDiverged("primal-dual iterates are no longer finite at iteration " + std::to_string(n));
    const Measurement cur = measure(res.state, g, model, gaps);
    res.report.rows.push_back(cur.row);
    if (!std::isfinite(cur.row.div_res) || !std::isfinite(cur.row.cons_res) || std::isnan(cur.stagnation_value))
      throw SolverDiverged("residuals are no longer finite at iteration " + std::to_string(n));
    const double change = std::abs(cur.stagnation_value - prev.stagnation_value);
    const bool stagnated = cur.finite_energy == prev.finite_energy &&
                           change <= config.energy_rtol * std::max(std::abs(cur.stagnation_value), 1e-300);
    const bool feasible = cur.row.div_res <= config.tol_div && cur.row.cons_res <= config.tol_consistency;
    stagnant_checks = stagnated ? stagnant_checks + 1 : 0;
    prev = cur;
    if (feasible && (stagnant_checks >= 2 || change == 0.0)) {
      res.report.converged = true;
      break;
    }
  }
  res.report.iterations = res.state.iteration;
  return res;
}

SolveResult solve(const GridSpec& g, const CurvatureModel& model, const DataTerm& term, const SolverConfig& config) {
  return solve(initial_guess(term), g, model, term, config);
}

}  // namespace rtv
