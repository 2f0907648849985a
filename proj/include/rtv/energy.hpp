#pragma once

// Discrete lifted energy, the three diagnostic energies of a face-averaged
// field, and a polygonal-curve oracle for the continuous curvature energy.

#include <array>
#include <vector>

#include "rtv/curvature.hpp"
#include "rtv/grid.hpp"

namespace rtv {

/// dx^2 dtheta sum_j h_bar(max(0, sigma_hat^x . e(theta_k)), sigma_hat^theta).
/// Only the aligned positive part enters; see misalignment_norm for the rest.
/// Can be +inf for TSC while the field is still far from aligned.
double lifted_energy(const AveragedField& sigma_hat, const CurvatureModel& model);

/// lifted_energy of the face average of sigma.
double discrete_energy(const FluxField& sigma, const CurvatureModel& model);

/// max over volumes of the part of sigma_hat^x that is not a nonnegative
/// multiple of e(theta_k): |orthogonal component| + negative part of the
/// aligned component.
double misalignment_norm(const AveragedField& sigma_hat);

/// dx^2 dtheta sum_j |sigma_hat_j| (Euclidean norm in R^3).
double field_mass(const AveragedField& sigma_hat);

struct Diagnostics {
  double h_tv = 0.0;
  double h_ac = 0.0;
  double h_sc = 0.0;
  /// Volumes with sigma_hat^x = 0 but sigma_hat^theta != 0, left out of h_sc.
  long sc_singular = 0;
};

Diagnostics diagnostics(const AveragedField& sigma_hat);

struct ParametricCurve {
  std::vector<std::array<double, 2>> samples;
  bool closed = true;
};

/// Regular n-gon of circumradius r around (cx, cy), counter-clockwise.
ParametricCurve regular_polygon(int n, double r, double cx = 0.0, double cy = 0.0);

/// Polygonal version of the integral of f(curvature) along the curve: each
/// vertex v carries the length l_v (half of each adjacent edge) and the
/// turning angle dtheta_v, and contributes l_v f(dtheta_v / l_v), i.e.
///   TAC  l_v + alpha |dtheta_v|
///   TRV  sqrt(l_v^2 + alpha^2 dtheta_v^2)
///   TSC  l_v + alpha^2 dtheta_v^2 / l_v
/// Endpoints of an open curve do not turn. Throws std::invalid_argument for
/// repeated consecutive samples or too few samples.
double curve_energy(const ParametricCurve& curve, const CurvatureModel& model);

}  // namespace rtv
