// Serial reference operators, written as a direct transcription of the
// half-integer index sets (1-based, facet "i - 1/2" stored at i - 1) and in
// scatter form. Only used to cross-check the parallel kernels.

#include "rtv/operators.hpp"

namespace rtv::reference {

namespace {

// Facet accessors in 1-based half-index notation.
// s1 at (i - 1/2, j, k) for 1 <= i <= N1, 1 <= j < N2, 1 <= k <= Nt.
double& s1_at(FluxField& f, const GridSpec& g, int i_minus_half, int j, int k) {
  return f.s1[g.s1(i_minus_half - 1, j - 1, (k - 1) % g.ntheta)];
}
double& s2_at(FluxField& f, const GridSpec& g, int i, int j_minus_half, int k) {
  return f.s2[g.s2(i - 1, j_minus_half - 1, (k - 1) % g.ntheta)];
}
// st at (i, j, k - 1/2); index Nt + 1/2 is identified with 1/2.
double& st_at(FluxField& f, const GridSpec& g, int i, int j, int k_minus_half) {
  return f.st[g.st(i - 1, j - 1, (k_minus_half - 1) % g.ntheta)];
}
double s1_get(const FluxField& f, const GridSpec& g, int a, int j, int k) {
  return s1_at(const_cast<FluxField&>(f), g, a, j, k);
}
double s2_get(const FluxField& f, const GridSpec& g, int i, int b, int k) {
  return s2_at(const_cast<FluxField&>(f), g, i, b, k);
}
double st_get(const FluxField& f, const GridSpec& g, int i, int j, int c) {
  return st_at(const_cast<FluxField&>(f), g, i, j, c);
}
// Volumes (i, j, k) for 1 <= i < N1, 1 <= j < N2, 1 <= k <= Nt. Volume k
// (1-based) is stored in slab k - 1, whose lower theta facet is k - 1/2.
std::size_t vol(const GridSpec& g, int i, int j, int k) { return g.volume(i - 1, j - 1, k - 1); }
// Pixel (i - 1/2, j - 1/2), 1 <= i <= N1, 1 <= j <= N2.
std::size_t pix(const GridSpec& g, int i, int j) { return g.pixel(i - 1, j - 1); }

}  // namespace

VolumeField apply_divergence(const FluxField& sigma, const GridSpec& g) {
  check_shape(sigma, g, "reference::apply_divergence");
  VolumeField out(g);
  for (int k = 1; k <= g.ntheta; ++k)
    for (int j = 1; j < g.n2; ++j)
      for (int i = 1; i < g.n1; ++i) {
        // facets i + 1/2 and i - 1/2 have half-indices i + 1 and i
        const double d1 = (s1_get(sigma, g, i + 1, j, k) - s1_get(sigma, g, i, j, k)) / g.dx;
        const double d2 = (s2_get(sigma, g, i, j + 1, k) - s2_get(sigma, g, i, j, k)) / g.dx;
        const double dt = (st_get(sigma, g, i, j, k + 1) - st_get(sigma, g, i, j, k)) / g.dtheta;
        out.values[vol(g, i, j, k)] = d1 + d2 + dt;
      }
  return out;
}

EdgeField apply_projection(const FluxField& sigma, const GridSpec& g) {
  check_shape(sigma, g, "reference::apply_projection");
  EdgeField out(g);
  for (int i = 1; i <= g.n1; ++i)
    for (int j = 1; j < g.n2; ++j) {
      double s = 0.0;
      for (int k = 1; k <= g.ntheta; ++k) s += s1_get(sigma, g, i, j, k);
      out.e1[g.e1(i - 1, j - 1)] = g.dtheta * s;
    }
  for (int i = 1; i < g.n1; ++i)
    for (int j = 1; j <= g.n2; ++j) {
      double s = 0.0;
      for (int k = 1; k <= g.ntheta; ++k) s += s2_get(sigma, g, i, j, k);
      out.e2[g.e2(i - 1, j - 1)] = g.dtheta * s;
    }
  return out;
}

EdgeField apply_gradient(const Image& u, const GridSpec& g) {
  check_shape(u, g, "reference::apply_gradient");
  EdgeField out(g);
  // Edge (i + 1/2, j) couples pixels (i + 1/2, j + 1/2) and (i + 1/2, j - 1/2),
  // i.e. 1-based pixels (i + 1, j + 1) and (i + 1, j).
  for (int i = 0; i < g.n1; ++i)
    for (int j = 1; j < g.n2; ++j)
      out.e1[g.e1(i, j - 1)] = (u.values[pix(g, i + 1, j + 1)] - u.values[pix(g, i + 1, j)]) / g.dx;
  for (int i = 1; i < g.n1; ++i)
    for (int j = 0; j < g.n2; ++j)
      out.e2[g.e2(i - 1, j)] = -(u.values[pix(g, i + 1, j + 1)] - u.values[pix(g, i, j + 1)]) / g.dx;
  return out;
}

AveragedField apply_averaging(const FluxField& sigma, const GridSpec& g) {
  check_shape(sigma, g, "reference::apply_averaging");
  AveragedField out(g);
  for (int k = 1; k <= g.ntheta; ++k)
    for (int j = 1; j < g.n2; ++j)
      for (int i = 1; i < g.n1; ++i)
        out.values[vol(g, i, j, k)] = {0.5 * (s1_get(sigma, g, i + 1, j, k) + s1_get(sigma, g, i, j, k)),
                                       0.5 * (s2_get(sigma, g, i, j + 1, k) + s2_get(sigma, g, i, j, k)),
                                       0.5 * (st_get(sigma, g, i, j, k + 1) + st_get(sigma, g, i, j, k))};
  return out;
}

FluxField adjoint_divergence(const VolumeField& phi, const GridSpec& g) {
  check_shape(phi, g, "reference::adjoint_divergence");
  FluxField out(g);
  for (int k = 1; k <= g.ntheta; ++k)
    for (int j = 1; j < g.n2; ++j)
      for (int i = 1; i < g.n1; ++i) {
        const double p = phi.values[vol(g, i, j, k)];
        s1_at(out, g, i + 1, j, k) += p / g.dx;
        s1_at(out, g, i, j, k) -= p / g.dx;
        s2_at(out, g, i, j + 1, k) += p / g.dx;
        s2_at(out, g, i, j, k) -= p / g.dx;
        st_at(out, g, i, j, k + 1) += p / g.dtheta;
        st_at(out, g, i, j, k) -= p / g.dtheta;
      }
  return out;
}

FluxField adjoint_projection(const EdgeField& psi, const GridSpec& g) {
  check_shape(psi, g, "reference::adjoint_projection");
  FluxField out(g);
  for (int i = 1; i <= g.n1; ++i)
    for (int j = 1; j < g.n2; ++j)
      for (int k = 1; k <= g.ntheta; ++k) s1_at(out, g, i, j, k) += g.dtheta * psi.e1[g.e1(i - 1, j - 1)];
  for (int i = 1; i < g.n1; ++i)
    for (int j = 1; j <= g.n2; ++j)
      for (int k = 1; k <= g.ntheta; ++k) s2_at(out, g, i, j, k) += g.dtheta * psi.e2[g.e2(i - 1, j - 1)];
  return out;
}

Image adjoint_gradient(const EdgeField& psi, const GridSpec& g) {
  check_shape(psi, g, "reference::adjoint_gradient");
  Image out(g.n1, g.n2);
  for (int i = 0; i < g.n1; ++i)
    for (int j = 1; j < g.n2; ++j) {
      const double p = psi.e1[g.e1(i, j - 1)] / g.dx;
      out.values[pix(g, i + 1, j + 1)] += p;
      out.values[pix(g, i + 1, j)] -= p;
    }
  for (int i = 1; i < g.n1; ++i)
    for (int j = 0; j < g.n2; ++j) {
      const double p = psi.e2[g.e2(i - 1, j)] / g.dx;
      out.values[pix(g, i + 1, j + 1)] -= p;
      out.values[pix(g, i, j + 1)] += p;
    }
  return out;
}

FluxField adjoint_averaging(const AveragedField& xi, const GridSpec& g) {
  check_shape(xi, g, "reference::adjoint_averaging");
  FluxField out(g);
  for (int k = 1; k <= g.ntheta; ++k)
    for (int j = 1; j < g.n2; ++j)
      for (int i = 1; i < g.n1; ++i) {
        const Vec3& x = xi.values[vol(g, i, j, k)];
        s1_at(out, g, i + 1, j, k) += 0.5 * x[0];
        s1_at(out, g, i, j, k) += 0.5 * x[0];
        s2_at(out, g, i, j + 1, k) += 0.5 * x[1];
        s2_at(out, g, i, j, k) += 0.5 * x[1];
        st_at(out, g, i, j, k + 1) += 0.5 * x[2];
        st_at(out, g, i, j, k) += 0.5 * x[2];
      }
  return out;
}

}  // namespace rtv::reference
