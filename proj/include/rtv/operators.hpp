#pragma once

// Linear operators of the staggered discretization and their adjoints.
//
//   divergence  D : flux -> volumes      (div of the Raviart-Thomas field per volume)
//   projection  P : flux -> edges        (dtheta * sum over k of s1 / s2)
//   gradient    G : image -> edges       (rotated gradient, e1 = d2 u, e2 = -d1 u)
//   averaging   A : flux -> volumes^3    (mean of each pair of opposite facets)
//
// The constraints of the lifted problem are D sigma = 0 and P sigma = G u.
// Adjoints are taken w.r.t. the unweighted Euclidean inner products.
// All kernels are gather-formulated and OpenMP-parallel; rtv::reference holds
// a serial scatter implementation used to cross-check them.

#include "rtv/grid.hpp"

namespace rtv {

VolumeField apply_divergence(const FluxField& sigma, const GridSpec& g);
EdgeField apply_projection(const FluxField& sigma, const GridSpec& g);
EdgeField apply_gradient(const Image& u, const GridSpec& g);
AveragedField apply_averaging(const FluxField& sigma, const GridSpec& g);

FluxField adjoint_divergence(const VolumeField& phi, const GridSpec& g);
FluxField adjoint_projection(const EdgeField& psi, const GridSpec& g);
Image adjoint_gradient(const EdgeField& psi, const GridSpec& g);
FluxField adjoint_averaging(const AveragedField& xi, const GridSpec& g);

/// Raviart-Thomas interpolant of sigma at (x1, x2, theta). Each component is
/// piecewise linear along its own axis and constant across the other two.
/// theta is wrapped into [0, 2 pi); throws std::out_of_range when (x1, x2)
/// lies outside [dx/2, (n-1/2) dx]^2.
Vec3 rt_eval(const FluxField& sigma, const GridSpec& g, double x1, double x2, double theta);

/// Rotated gradient averaged over each volume's two parallel edges, one
/// 2-vector per spatial volume (index g.volume(i, j, 0)). Its kernel is
/// spanned by constants and the checkerboard (-1)^(i+j).
std::vector<std::array<double, 2>> averaged_gradient(const Image& u, const GridSpec& g);

namespace reference {

VolumeField apply_divergence(const FluxField& sigma, const GridSpec& g);
EdgeField apply_projection(const FluxField& sigma, const GridSpec& g);
EdgeField apply_gradient(const Image& u, const GridSpec& g);
AveragedField apply_averaging(const FluxField& sigma, const GridSpec& g);

FluxField adjoint_divergence(const VolumeField& phi, const GridSpec& g);
FluxField adjoint_projection(const EdgeField& psi, const GridSpec& g);
Image adjoint_gradient(const EdgeField& psi, const GridSpec& g);
FluxField adjoint_averaging(const AveragedField& xi, const GridSpec& g);

}  // namespace reference
}  // namespace rtv
