#pragma once

// Curvature models f(t) for the lifted line energy and the convex sets they
// induce in the dual.
//
//   TAC  f1(t) = 1 + alpha |t|
//   TRV  f2(t) = sqrt(1 + alpha^2 t^2)
//   TSC  f3(t) = 1 + alpha^2 t^2
//
// The lifted integrand h(theta, p) = |p^x| f(p^theta / |p^x|) (finite only for
// p^x a nonnegative multiple of (cos theta, sin theta)) is the support function
// of H(theta) = { xi : xi^x . e(theta) <= -f*(xi^theta) }. Projecting onto
// H(theta) reduces to projecting onto its 2D profile
// P = { (a, b) : a <= -f*(b) } in the (xi^x . e(theta), xi^theta) plane.

#include <string>
#include <string_view>

#include "rtv/grid.hpp"

namespace rtv {

enum class CurvatureKind { tac, trv, tsc };

struct CurvatureModel {
  CurvatureKind kind = CurvatureKind::tsc;
  double alpha = 1.0;

  /// Throws std::invalid_argument unless alpha > 0.
  static CurvatureModel make(CurvatureKind kind, double alpha);
};

CurvatureKind parse_curvature_kind(std::string_view name);
std::string to_string(CurvatureKind kind);

struct ProfilePoint {
  double xi_x_theta = 0.0;  // component of xi^x along e(theta)
  double xi_theta = 0.0;
};

/// Iteration counts of the last root solve (zero when no solve was needed).
struct ProjectionStats {
  int newton_iterations = 0;
  int bisection_iterations = 0;
};

double f_eval(const CurvatureModel& model, double t);

/// Convex conjugate f*(s); +inf outside its domain.
double conjugate_eval(const CurvatureModel& model, double s);

/// Lifted integrand; +inf when p^x is not a nonnegative multiple of e(theta).
/// Alignment is tested with relative tolerance 1e-12.
double h_eval(const CurvatureModel& model, double theta, const Vec3& p);

/// h restricted to aligned vectors: h_bar(s, t) = h(theta, (s e(theta), t)) for s >= 0.
double h_aligned(const CurvatureModel& model, double s, double t);

/// Amount by which a profile point violates a <= -f*(b); 0 when feasible.
/// Outside the domain of f* the excess |b| - alpha is reported instead of +inf.
double profile_violation(const CurvatureModel& model, const ProfilePoint& eta);

/// Euclidean projection onto the profile of the model.
ProfilePoint project_profile(const CurvatureModel& model, ProfilePoint eta, ProjectionStats* stats = nullptr);

/// Euclidean projection onto H(theta).
Vec3 project_H(const CurvatureModel& model, double theta, const Vec3& eta);

/// Same, with e(theta) = (cos_t, sin_t) precomputed.
Vec3 project_H(const CurvatureModel& model, double cos_t, double sin_t, const Vec3& eta,
               ProjectionStats* stats = nullptr);

double h_violation(const CurvatureModel& model, double theta, const Vec3& xi);

/// h(theta, p) - xi . p for xi in H(theta). Throws std::invalid_argument when
/// xi violates H(theta) by more than 1e-9 max(1, |xi|_inf)^2 or h(theta, p)
/// is infinite.
double support_gap(const CurvatureModel& model, double theta, const Vec3& p, const Vec3& xi);

/// Largest gamma with f(t) >= gamma sqrt(1 + t^2) for all t.
double growth_constant(const CurvatureModel& model);

namespace detail {

/// Positive Lagrange multiplier of the TRV profile projection for a point
/// outside the profile with eta_x > 0: the positive root of the quartic
/// (a + 2l/a)^2 x^2 + (1 + 2l)^2 t^2 - (1 + 2l)^2 (a + 2l/a)^2, found by
/// safeguarded Newton starting from lambda = 1e3.
double trv_multiplier(double eta_x, double eta_t, double alpha, ProjectionStats* stats = nullptr);

/// Same for the TSC cubic (2a^2 + l)^2 (x - 1 - l) + (a t)^2.
double tsc_multiplier(double eta_x, double eta_t, double alpha, ProjectionStats* stats = nullptr);

}  // namespace detail
}  // namespace rtv
