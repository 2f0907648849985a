#include "rtv/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rtv/parallel.hpp"

namespace rtv {

VolumeField apply_divergence(const FluxField& sigma, const GridSpec& g) {
  check_shape(sigma, g, "apply_divergence");
  VolumeField out(g);
  const double ix = 1.0 / g.dx;
  const double it = 1.0 / g.dtheta;
  const int ni = g.n1 - 1, nj = g.n2 - 1;
  RTV_OMP(parallel for collapse(2) schedule(static))
  for (int k = 0; k < g.ntheta; ++k) {
    for (int j = 0; j < nj; ++j) {
      const int kn = g.next_k(k);
      const double* s1 = &sigma.s1[g.s1(0, j, k)];
      const double* s2lo = &sigma.s2[g.s2(0, j, k)];
      const double* s2hi = &sigma.s2[g.s2(0, j + 1, k)];
      const double* stlo = &sigma.st[g.st(0, j, k)];
      const double* sthi = &sigma.st[g.st(0, j, kn)];
      double* d = &out.values[g.volume(0, j, k)];
      for (int i = 0; i < ni; ++i)
        d[i] = (s1[i + 1] - s1[i]) * ix + (s2hi[i] - s2lo[i]) * ix + (sthi[i] - stlo[i]) * it;
    }
  }
  return out;
}

EdgeField apply_projection(const FluxField& sigma, const GridSpec& g) {
  check_shape(sigma, g, "apply_projection");
  EdgeField out(g);
  RTV_OMP(parallel for schedule(static))
  for (int j = 0; j < g.n2 - 1; ++j) {
    double* e = &out.e1[g.e1(0, j)];
    for (int k = 0; k < g.ntheta; ++k) {
      const double* s = &sigma.s1[g.s1(0, j, k)];
      for (int i = 0; i < g.n1; ++i) e[i] += s[i];
    }
    for (int i = 0; i < g.n1; ++i) e[i] *= g.dtheta;
  }
  RTV_OMP(parallel for schedule(static))
  for (int j = 0; j < g.n2; ++j) {
    double* e = &out.e2[g.e2(0, j)];
    for (int k = 0; k < g.ntheta; ++k) {
      const double* s = &sigma.s2[g.s2(0, j, k)];
      for (int i = 0; i < g.n1 - 1; ++i) e[i] += s[i];
    }
    for (int i = 0; i < g.n1 - 1; ++i) e[i] *= g.dtheta;
  }
  return out;
}

EdgeField apply_gradient(const Image& u, const GridSpec& g) {
  check_shape(u, g, "apply_gradient");
  EdgeField out(g);
  const double ix = 1.0 / g.dx;
  RTV_OMP(parallel for schedule(static))
  for (int j = 0; j < g.n2 - 1; ++j)
    for (int i = 0; i < g.n1; ++i) out.e1[g.e1(i, j)] = (u(i, j + 1) - u(i, j)) * ix;
  RTV_OMP(parallel for schedule(static))
  for (int j = 0; j < g.n2; ++j)
    for (int i = 0; i < g.n1 - 1; ++i) out.e2[g.e2(i, j)] = -(u(i + 1, j) - u(i, j)) * ix;
  return out;
}

AveragedField apply_averaging(const FluxField& sigma, const GridSpec& g) {
  check_shape(sigma, g, "apply_averaging");
  AveragedField out(g);
  const int ni = g.n1 - 1, nj = g.n2 - 1;
  RTV_OMP(parallel for collapse(2) schedule(static))
  for (int k = 0; k < g.ntheta; ++k) {
    for (int j = 0; j < nj; ++j) {
      const int kn = g.next_k(k);
      for (int i = 0; i < ni; ++i) {
        out.values[g.volume(i, j, k)] = {
            0.5 * (sigma.s1[g.s1(i, j, k)] + sigma.s1[g.s1(i + 1, j, k)]),
            0.5 * (sigma.s2[g.s2(i, j, k)] + sigma.s2[g.s2(i, j + 1, k)]),
            0.5 * (sigma.st[g.st(i, j, k)] + sigma.st[g.st(i, j, kn)])};
      }
    }
  }
  return out;
}

FluxField adjoint_divergence(const VolumeField& phi, const GridSpec& g) {
  check_shape(phi, g, "adjoint_divergence");
  FluxField out(g);
  const double ix = 1.0 / g.dx;
  const double it = 1.0 / g.dtheta;
  const int ni = g.n1 - 1, nj = g.n2 - 1;
  // s1 facet i is the upper face of volume i-1 and the lower face of volume i.
  RTV_OMP(parallel for collapse(2) schedule(static))
  for (int k = 0; k < g.ntheta; ++k) {
    for (int j = 0; j < nj; ++j) {
      const double* p = &phi.values[g.volume(0, j, k)];
      double* s = &out.s1[g.s1(0, j, k)];
      for (int i = 0; i < g.n1; ++i) {
        const double lo = i > 0 ? p[i - 1] : 0.0;
        const double hi = i < ni ? p[i] : 0.0;
        s[i] = (lo - hi) * ix;
      }
    }
  }
  RTV_OMP(parallel for collapse(2) schedule(static))
  for (int k = 0; k < g.ntheta; ++k) {
    for (int j = 0; j < g.n2; ++j) {
      double* s = &out.s2[g.s2(0, j, k)];
      for (int i = 0; i < ni; ++i) {
        const double lo = j > 0 ? phi.values[g.volume(i, j - 1, k)] : 0.0;
        const double hi = j < nj ? phi.values[g.volume(i, j, k)] : 0.0;
        s[i] = (lo - hi) * ix;
      }
    }
  }
  RTV_OMP(parallel for collapse(2) schedule(static))
  for (int k = 0; k < g.ntheta; ++k) {
    for (int j = 0; j < nj; ++j) {
      const double* pk = &phi.values[g.volume(0, j, k)];
      const double* pp = &phi.values[g.volume(0, j, g.prev_k(k))];
      double* s = &out.st[g.st(0, j, k)];
      for (int i = 0; i < ni; ++i) s[i] = (pp[i] - pk[i]) * it;
    }
  }
  return out;
}

FluxField adjoint_projection(const EdgeField& psi, const GridSpec& g) {
  check_shape(psi, g, "adjoint_projection");
  FluxField out(g);
  RTV_OMP(parallel for collapse(2) schedule(static))
  for (int k = 0; k < g.ntheta; ++k)
    for (int j = 0; j < g.n2 - 1; ++j)
      for (int i = 0; i < g.n1; ++i) out.s1[g.s1(i, j, k)] = g.dtheta * psi.e1[g.e1(i, j)];
  RTV_OMP(parallel for collapse(2) schedule(static))
  for (int k = 0; k < g.ntheta; ++k)
    for (int j = 0; j < g.n2; ++j)
      for (int i = 0; i < g.n1 - 1; ++i) out.s2[g.s2(i, j, k)] = g.dtheta * psi.e2[g.e2(i, j)];
  return out;
}

Image adjoint_gradient(const EdgeField& psi, const GridSpec& g) {
  check_shape(psi, g, "adjoint_gradient");
  Image out(g.n1, g.n2);
  const double ix = 1.0 / g.dx;
  RTV_OMP(parallel for schedule(static))
  for (int j = 0; j < g.n2; ++j) {
    for (int i = 0; i < g.n1; ++i) {
      double v = 0.0;
      if (j > 0) v += psi.e1[g.e1(i, j - 1)];
      if (j < g.n2 - 1) v -= psi.e1[g.e1(i, j)];
      if (i > 0) v -= psi.e2[g.e2(i - 1, j)];
      if (i < g.n1 - 1) v += psi.e2[g.e2(i, j)];
      out(i, j) = v * ix;
    }
  }
  return out;
}

FluxField adjoint_averaging(const AveragedField& xi, const GridSpec& g) {
  check_shape(xi, g, "adjoint_averaging");
  FluxField out(g);
  const int ni = g.n1 - 1, nj = g.n2 - 1;
  RTV_OMP(parallel for collapse(2) schedule(static))
  for (int k = 0; k < g.ntheta; ++k) {
    for (int j = 0; j < nj; ++j) {
      for (int i = 0; i < g.n1; ++i) {
        const double lo = i > 0 ? xi.values[g.volume(i - 1, j, k)][0] : 0.0;
        const double hi = i < ni ? xi.values[g.volume(i, j, k)][0] : 0.0;
        out.s1[g.s1(i, j, k)] = 0.5 * (lo + hi);
      }
    }
  }
  RTV_OMP(parallel for collapse(2) schedule(static))
  for (int k = 0; k < g.ntheta; ++k) {
    for (int j = 0; j < g.n2; ++j) {
      for (int i = 0; i < ni; ++i) {
        const double lo = j > 0 ? xi.values[g.volume(i, j - 1, k)][1] : 0.0;
        const double hi = j < nj ? xi.values[g.volume(i, j, k)][1] : 0.0;
        out.s2[g.s2(i, j, k)] = 0.5 * (lo + hi);
      }
    }
  }
  RTV_OMP(parallel for collapse(2) schedule(static))
  for (int k = 0; k < g.ntheta; ++k) {
    for (int j = 0; j < nj; ++j) {
      const int kp = g.prev_k(k);
      for (int i = 0; i < ni; ++i)
        out.st[g.st(i, j, k)] = 0.5 * (xi.values[g.volume(i, j, kp)][2] + xi.values[g.volume(i, j, k)][2]);
    }
  }
  return out;
}

namespace {

double hat(double t) { return std::max(0.0, 1.0 - std::abs(t)); }

}  // namespace

Vec3 rt_eval(const FluxField& sigma, const GridSpec& g, double x1, double x2, double theta) {
  check_shape(sigma, g, "rt_eval");
  const double lo = 0.5 * g.dx;
  const double hi1 = (g.n1 - 0.5) * g.dx;
  const double hi2 = (g.n2 - 0.5) * g.dx;
  if (!(x1 >= lo && x1 <= hi1 && x2 >= lo && x2 <= hi2))
    throw std::out_of_range("rt_eval: point outside the discretized spatial domain");

  const double two_pi = 2.0 * std::numbers::pi;
  theta = std::fmod(theta, two_pi);
  if (theta < 0.0) theta += two_pi;

  // Volume containing the point; the upper boundary belongs to the last volume.
  const int vi = std::min(int(std::floor(x1 / g.dx - 0.5)), g.n1 - 2);
  const int vj = std::min(int(std::floor(x2 / g.dx - 0.5)), g.n2 - 2);
  const int vk = int(std::floor(theta / g.dtheta + 0.5)) % g.ntheta;

  // Local coordinates relative to the lower facets.
  const double t1 = x1 / g.dx - (vi + 0.5);
  const double t2 = x2 / g.dx - (vj + 0.5);
  double tt = theta / g.dtheta - (vk - 0.5);
  if (tt > 1.0) tt -= g.ntheta;  // theta close to 2 pi falls in slab 0

  const int kn = g.next_k(vk);
  return {sigma.s1[g.s1(vi, vj, vk)] * hat(t1) + sigma.s1[g.s1(vi + 1, vj, vk)] * hat(t1 - 1.0),
          sigma.s2[g.s2(vi, vj, vk)] * hat(t2) + sigma.s2[g.s2(vi, vj + 1, vk)] * hat(t2 - 1.0),
          sigma.st[g.st(vi, vj, vk)] * hat(tt) + sigma.st[g.st(vi, vj, kn)] * hat(tt - 1.0)};
}

std::vector<std::array<double, 2>> averaged_gradient(const Image& u, const GridSpec& g) {
  check_shape(u, g, "averaged_gradient");
  std::vector<std::array<double, 2>> out(std::size_t(g.n1 - 1) * (g.n2 - 1));
  const double h = 0.5 / g.dx;
  for (int j = 0; j < g.n2 - 1; ++j)
    for (int i = 0; i < g.n1 - 1; ++i)
      out[g.volume(i, j, 0)] = {h * ((u(i, j + 1) - u(i, j)) + (u(i + 1, j + 1) - u(i + 1, j))),
                                -h * ((u(i + 1, j) - u(i, j)) + (u(i + 1, j + 1) - u(i, j + 1)))};
  return out;
}

}  // namespace rtv
