#pragma once

// Dense-matrix reference for one preconditioned primal-dual iteration. The
// stacked operator K = [A; D; (P, -G)] is assembled entry by entry from the
// stencil definitions, the diagonal steps come from its row and column sums,
// and the update is written with plain matrix-vector products.

#include <cmath>
#include <functional>
#include <vector>

#include "rtv/curvature.hpp"
#include "rtv/grid.hpp"
#include "rtv/solver.hpp"
#include "support.hpp"

namespace rtv::test {

class DenseOracle {
 public:
  explicit DenseOracle(const GridSpec& g) : g_(g) {
    nv_ = g.volume_count();
    ns1_ = g.s1_count();
    ns2_ = g.s2_count();
    nst_ = g.st_count();
    ne1_ = g.e1_count();
    ne2_ = g.e2_count();
    npx_ = g.pixel_count();
    rows_ = 3 * nv_ + nv_ + ne1_ + ne2_;
    cols_ = ns1_ + ns2_ + nst_ + npx_;
    K_.assign(rows_ * cols_, 0.0);
    assemble();
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double at(std::size_t r, std::size_t c) const { return K_[r * cols_ + c]; }

  // Row blocks: xi (component-major: xi1 block, xi2 block, xit block), phi, psi1, psi2.
  std::size_t row_xi(int comp, std::size_t v) const { return comp * nv_ + v; }
  std::size_t row_phi(std::size_t v) const { return 3 * nv_ + v; }
  std::size_t row_psi1(std::size_t e) const { return 4 * nv_ + e; }
  std::size_t row_psi2(std::size_t e) const { return 4 * nv_ + ne1_ + e; }
  // Column blocks: s1, s2, st, u.
  std::size_t col_s1(std::size_t f) const { return f; }
  std::size_t col_s2(std::size_t f) const { return ns1_ + f; }
  std::size_t col_st(std::size_t f) const { return ns1_ + ns2_ + f; }
  std::size_t col_u(std::size_t p) const { return ns1_ + ns2_ + nst_ + p; }

  double col_sum(std::size_t c, double power) const {
    double s = 0.0;
    for (std::size_t r = 0; r < rows_; ++r)
      if (at(r, c) != 0.0) s += std::pow(std::abs(at(r, c)), power);
    return s;
  }
  double row_sum(std::size_t r, double power) const {
    double s = 0.0;
    for (std::size_t c = 0; c < cols_; ++c)
      if (at(r, c) != 0.0) s += std::pow(std::abs(at(r, c)), power);
    return s;
  }

  /// One iteration of the preconditioned scheme; `prox_u(p, v, tau)` is the
  /// per-pixel proximal map of the data term.
  void iterate(SolverState& st, const CurvatureModel& model, const SolverConfig& cfg,
               const std::function<double(std::size_t, double, double)>& prox_u) const {
    const double a = cfg.precond_power;
    std::vector<double> x = pack_primal(st.sigma, st.u), xbar = pack_primal(st.sigma_bar, st.u_bar);
    std::vector<double> y = pack_dual(st);

    std::vector<double> Kx(rows_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) Kx[r] += at(r, c) * xbar[c];
    std::vector<double> z(rows_);
    for (std::size_t r = 0; r < rows_; ++r) z[r] = y[r] + Kx[r] / row_sum(r, a);
    for (int k = 0; k < g_.ntheta; ++k)
      for (int j = 0; j < g_.n2 - 1; ++j)
        for (int i = 0; i < g_.n1 - 1; ++i) {
          const std::size_t v = g_.volume(i, j, k);
          const Vec3 p = project_H(model, g_.theta(k), {z[row_xi(0, v)], z[row_xi(1, v)], z[row_xi(2, v)]});
          for (int c = 0; c < 3; ++c) z[row_xi(c, v)] = p[c];
        }

    std::vector<double> Kty(cols_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) Kty[c] += at(r, c) * z[r];
    std::vector<double> xn(cols_);
    for (std::size_t c = 0; c < cols_; ++c) xn[c] = x[c] - Kty[c] / col_sum(c, 2.0 - a);
    if (cfg.field_mask) {
      const FacetMask& m = *cfg.field_mask;
      for (int k = 0; k < g_.ntheta; ++k) {
        for (int j = 0; j < g_.n2 - 1; ++j)
          for (int i = 0; i < g_.n1; ++i)
            if (m.s1[g_.e1(i, j)]) xn[col_s1(g_.s1(i, j, k))] = 0.0;
        for (int j = 0; j < g_.n2; ++j)
          for (int i = 0; i < g_.n1 - 1; ++i)
            if (m.s2[g_.e2(i, j)]) xn[col_s2(g_.s2(i, j, k))] = 0.0;
      }
    }
    for (std::size_t p = 0; p < npx_; ++p) {
      const std::size_t c = col_u(p);
      xn[c] = prox_u(p, xn[c], 1.0 / col_sum(c, 2.0 - a));
    }
    std::vector<double> xb(cols_);
    for (std::size_t c = 0; c < cols_; ++c) xb[c] = xn[c] + cfg.overrelax * (xn[c] - x[c]);

    unpack_primal(xn, st.sigma, st.u);
    unpack_primal(xb, st.sigma_bar, st.u_bar);
    unpack_dual(z, st);
    ++st.iteration;
  }

 private:
  void set(std::size_t r, std::size_t c, double v) { K_[r * cols_ + c] += v; }

  void assemble() {
    const GridSpec& g = g_;
    const double ix = 1.0 / g.dx, it = 1.0 / g.dtheta;
    for (int k = 0; k < g.ntheta; ++k)
      for (int j = 0; j < g.n2 - 1; ++j)
        for (int i = 0; i < g.n1 - 1; ++i) {
          const std::size_t v = g.volume(i, j, k);
          const int kn = (k + 1) % g.ntheta;
          set(row_xi(0, v), col_s1(g.s1(i, j, k)), 0.5);
          set(row_xi(0, v), col_s1(g.s1(i + 1, j, k)), 0.5);
          set(row_xi(1, v), col_s2(g.s2(i, j, k)), 0.5);
          set(row_xi(1, v), col_s2(g.s2(i, j + 1, k)), 0.5);
          set(row_xi(2, v), col_st(g.st(i, j, k)), 0.5);
          set(row_xi(2, v), col_st(g.st(i, j, kn)), 0.5);
          set(row_phi(v), col_s1(g.s1(i, j, k)), -ix);
          set(row_phi(v), col_s1(g.s1(i + 1, j, k)), ix);
          set(row_phi(v), col_s2(g.s2(i, j, k)), -ix);
          set(row_phi(v), col_s2(g.s2(i, j + 1, k)), ix);
          set(row_phi(v), col_st(g.st(i, j, k)), -it);
          set(row_phi(v), col_st(g.st(i, j, kn)), it);
        }
    for (int j = 0; j < g.n2 - 1; ++j)
      for (int i = 0; i < g.n1; ++i) {
        const std::size_t r = row_psi1(g.e1(i, j));
        for (int k = 0; k < g.ntheta; ++k) set(r, col_s1(g.s1(i, j, k)), g.dtheta);
        // -(G u)_e1 = -(u(i, j+1) - u(i, j)) / dx
        set(r, col_u(g.pixel(i, j)), ix);
        set(r, col_u(g.pixel(i, j + 1)), -ix);
      }
    for (int j = 0; j < g.n2; ++j)
      for (int i = 0; i < g.n1 - 1; ++i) {
        const std::size_t r = row_psi2(g.e2(i, j));
        for (int k = 0; k < g.ntheta; ++k) set(r, col_s2(g.s2(i, j, k)), g.dtheta);
        // -(G u)_e2 = (u(i+1, j) - u(i, j)) / dx
        set(r, col_u(g.pixel(i, j)), -ix);
        set(r, col_u(g.pixel(i + 1, j)), ix);
      }
  }

  std::vector<double> pack_primal(const FluxField& s, const Image& u) const {
    std::vector<double> x(cols_);
    for (std::size_t f = 0; f < ns1_; ++f) x[col_s1(f)] = s.s1[f];
    for (std::size_t f = 0; f < ns2_; ++f) x[col_s2(f)] = s.s2[f];
    for (std::size_t f = 0; f < nst_; ++f) x[col_st(f)] = s.st[f];
    for (std::size_t p = 0; p < npx_; ++p) x[col_u(p)] = u.values[p];
    return x;
  }
  void unpack_primal(const std::vector<double>& x, FluxField& s, Image& u) const {
    for (std::size_t f = 0; f < ns1_; ++f) s.s1[f] = x[col_s1(f)];
    for (std::size_t f = 0; f < ns2_; ++f) s.s2[f] = x[col_s2(f)];
    for (std::size_t f = 0; f < nst_; ++f) s.st[f] = x[col_st(f)];
    for (std::size_t p = 0; p < npx_; ++p) u.values[p] = x[col_u(p)];
  }
  std::vector<double> pack_dual(const SolverState& st) const {
    std::vector<double> y(rows_);
    for (std::size_t v = 0; v < nv_; ++v) {
      for (int c = 0; c < 3; ++c) y[row_xi(c, v)] = st.xi.values[v][c];
      y[row_phi(v)] = st.phi.values[v];
    }
    for (std::size_t e = 0; e < ne1_; ++e) y[row_psi1(e)] = st.psi.e1[e];
    for (std::size_t e = 0; e < ne2_; ++e) y[row_psi2(e)] = st.psi.e2[e];
    return y;
  }
  void unpack_dual(const std::vector<double>& y, SolverState& st) const {
    for (std::size_t v = 0; v < nv_; ++v) {
      for (int c = 0; c < 3; ++c) st.xi.values[v][c] = y[row_xi(c, v)];
      st.phi.values[v] = y[row_phi(v)];
    }
    for (std::size_t e = 0; e < ne1_; ++e) st.psi.e1[e] = y[row_psi1(e)];
    for (std::size_t e = 0; e < ne2_; ++e) st.psi.e2[e] = y[row_psi2(e)];
  }

  GridSpec g_;
  std::size_t nv_, ns1_, ns2_, nst_, ne1_, ne2_, npx_, rows_, cols_;
  std::vector<double> K_;
};

/// Random primal/dual iterate with xi already inside H(theta_k).
inline SolverState random_state(const GridSpec& g, std::mt19937_64& rng, const CurvatureModel& model) {
  SolverState s = initial_state(g, test::random_image(g.n1, g.n2, rng));
  s.u_bar = test::random_image(g.n1, g.n2, rng);
  s.sigma = test::random_flux(g, rng);
  s.sigma_bar = test::random_flux(g, rng);
  s.phi = test::random_volume(g, rng);
  s.psi = test::random_edges(g, rng);
  s.xi = test::random_averaged(g, rng);
  for (int k = 0; k < g.ntheta; ++k)
    for (int j = 0; j < g.n2 - 1; ++j)
      for (int i = 0; i < g.n1 - 1; ++i) {
        Vec3& x = s.xi.values[g.volume(i, j, k)];
        x = project_H(model, g.theta(k), x);
      }
  return s;
}

/// Largest absolute difference between all variables of two solver states.
inline double state_distance(const SolverState& a, const SolverState& b) {
  double d = 0.0;
  auto cmp = [&](const std::vector<double>& x, const std::vector<double>& y) {
    for (std::size_t n = 0; n < x.size(); ++n) d = std::max(d, std::abs(x[n] - y[n]));
  };
  cmp(a.u.values, b.u.values);
  cmp(a.u_bar.values, b.u_bar.values);
  cmp(a.sigma.s1, b.sigma.s1);
  cmp(a.sigma.s2, b.sigma.s2);
  cmp(a.sigma.st, b.sigma.st);
  cmp(a.sigma_bar.s1, b.sigma_bar.s1);
  cmp(a.sigma_bar.s2, b.sigma_bar.s2);
  cmp(a.sigma_bar.st, b.sigma_bar.st);
  cmp(a.phi.values, b.phi.values);
  cmp(a.psi.e1, b.psi.e1);
  cmp(a.psi.e2, b.psi.e2);
  for (std::size_t v = 0; v < a.xi.values.size(); ++v)
    for (int c = 0; c < 3; ++c) d = std::max(d, std::abs(a.xi.values[v][c] - b.xi.values[v][c]));
  return d;
}

}  // namespace rtv::test
