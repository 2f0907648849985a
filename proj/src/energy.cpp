#include "rtv/energy.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "rtv/operators.hpp"
#include "rtv/parallel.hpp"

namespace rtv {

namespace {

// Sums term(k, j) over all volumes: one partial sum per orientation slab,
// added in slab order so the result does not depend on the thread count.
template <class Term>
double slab_sum(const GridSpec& g, Term&& term) {
  const int nt = g.ntheta;
  const std::size_t per_slab = std::size_t(g.n1 - 1) * (g.n2 - 1);
  std::vector<double> partial(nt, 0.0);
  RTV_OMP(parallel for schedule(static))
  for (int k = 0; k < nt; ++k) {
    double s = 0.0;
    for (std::size_t j = 0; j < per_slab; ++j) s += term(k, k * per_slab + j);
    partial[k] = s;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

double cell_measure(const GridSpec& g) { return g.dx * g.dx * g.dtheta; }

}  // namespace

double lifted_energy(const AveragedField& sh, const CurvatureModel& model) {
  const GridSpec& g = sh.grid;
  const double sum = slab_sum(g, [&](int k, std::size_t j) {
    const Vec3& p = sh.values[j];
    const double th = g.theta(k);
    const double along = p[0] * std::cos(th) + p[1] * std::sin(th);
    return h_aligned(model, std::max(0.0, along), p[2]);
  });
  return cell_measure(g) * sum;
}

double discrete_energy(const FluxField& sigma, const CurvatureModel& model) {
  return lifted_energy(apply_averaging(sigma, sigma.grid), model);
}

double misalignment_norm(const AveragedField& sh) {
  const GridSpec& g = sh.grid;
  const std::size_t per_slab = std::size_t(g.n1 - 1) * (g.n2 - 1);
  double worst = 0.0;
  for (int k = 0; k < g.ntheta; ++k) {
    const double c = std::cos(g.theta(k)), s = std::sin(g.theta(k));
    for (std::size_t j = k * per_slab; j < (k + 1) * per_slab; ++j) {
      const Vec3& p = sh.values[j];
      const double along = p[0] * c + p[1] * s;
      const double across = -p[0] * s + p[1] * c;
      worst = std::max(worst, std::abs(across) + std::max(0.0, -along));
    }
  }
  return worst;
}

double field_mass(const AveragedField& sh) {
  const double sum = slab_sum(sh.grid, [&](int, std::size_t j) {
    const Vec3& p = sh.values[j];
    return std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
  });
  return cell_measure(sh.grid) * sum;
}

Diagnostics diagnostics(const AveragedField& sh) {
  const GridSpec& g = sh.grid;
  Diagnostics d;
  double tv = 0.0, ac = 0.0, sc = 0.0;
  for (const Vec3& p : sh.values) {
    const double nx = std::hypot(p[0], p[1]);
    tv += nx;
    ac += std::abs(p[2]);
    if (nx > 0.0) sc += p[2] * p[2] / nx;
    else if (p[2] != 0.0) ++d.sc_singular;
  }
  const double m = cell_measure(g);
  d.h_tv = m * tv;
  d.h_ac = m * ac;
  d.h_sc = m * sc;
  return d;
}

ParametricCurve regular_polygon(int n, double r, double cx, double cy) {
  if (n < 3 || !(r > 0.0)) throw std::invalid_argument("regular_polygon needs n >= 3 and r > 0");
  ParametricCurve c;
  c.closed = true;
  for (int v = 0; v < n; ++v) {
    const double a = 2.0 * std::numbers::pi * v / n;
    c.samples.push_back({cx + r * std::cos(a), cy + r * std::sin(a)});
  }
  return c;
}

double curve_energy(const ParametricCurve& curve, const CurvatureModel& model) {
  const auto& pts = curve.samples;
  const std::size_t n = pts.size();
  if (curve.closed ? n < 3 : n < 2) throw std::invalid_argument("curve_energy: too few samples");
  const std::size_t edges = curve.closed ? n : n - 1;

  std::vector<double> len(edges), dir(edges);
  for (std::size_t e = 0; e < edges; ++e) {
    const auto& a = pts[e];
    const auto& b = pts[(e + 1) % n];
    len[e] = std::hypot(b[0] - a[0], b[1] - a[1]);
    if (!(len[e] > 0.0)) throw std::invalid_argument("curve_energy: repeated consecutive samples");
    dir[e] = std::atan2(b[1] - a[1], b[0] - a[0]);
  }

  const double alpha = model.alpha;
  double total = 0.0;
  for (std::size_t v = 0; v < n; ++v) {
    double l = 0.0, turn = 0.0;
    const bool has_in = curve.closed || v > 0;
    const bool has_out = curve.closed || v + 1 < n;
    const std::size_t in = (v + edges - 1) % edges, out = v % edges;
    if (has_in) l += 0.5 * len[in];
    if (has_out) l += 0.5 * len[out];
    if (has_in && has_out) turn = std::remainder(dir[out] - dir[in], 2.0 * std::numbers::pi);
    switch (model.kind) {
      case CurvatureKind::tac: total += l + alpha * std::abs(turn); break;
      case CurvatureKind::trv: total += std::hypot(l, alpha * turn); break;
      case CurvatureKind::tsc: total += l + alpha * alpha * turn * turn / l; break;
    }
  }
  return total;
}

}  // namespace rtv
