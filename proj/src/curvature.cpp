#include "rtv/curvature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace rtv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kInitialMultiplier = 1e3;
constexpr int kMaxNewton = 50;
constexpr int kMaxBisection = 200;

// Root of a function that is positive at 0 and changes sign exactly once on
// (0, inf). Newton from the right, kept inside a shrinking sign bracket. A
// Newton step that leaves the bracket is retried from the lower end of the
// bracket, and replaced by bisection if that fails too.
// `fn(l)` returns {value, derivative, magnitude of the summed terms}.
template <class Fn>
double positive_root(Fn&& fn, ProjectionStats* stats) {
  double lo = 0.0;
  double hi = kInitialMultiplier;
  while (fn(hi)[0] > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) throw std::runtime_error("profile projection: multiplier bracket overflow");
  }

  int newton = 0, bisect = 0;
  double lam = hi;
  bool have_lo = false;
  std::array<double, 3> at_lo{};
  bool done = false;
  for (; newton < kMaxNewton && !done; ++newton) {
    const auto val = fn(lam);
    const double p = val[0], dp = val[1];
    if (std::abs(p) <= 1e-15 * val[2]) break;
    if (p > 0.0) {
      lo = lam;
      at_lo = val;
      have_lo = true;
    } else {
      hi = lam;
    }
    auto inside = [&](double v) { return std::isfinite(v) && v > lo && v < hi; };
    double next = lam - p / dp;
    if (!inside(next)) {
      if (!have_lo) {
        at_lo = fn(lo);
        have_lo = true;
      }
      next = lo - at_lo[0] / at_lo[1];
    }
    if (!inside(next)) {
      next = 0.5 * (lo + hi);
      ++bisect;
    }
    done = std::abs(next - lam) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, lam);
    lam = next;
  }
  if (newton == kMaxNewton && !done) {
    // Newton stalled; finish with plain bisection on the bracket.
    for (int it = 0; it < kMaxBisection && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (fn(mid)[0] > 0.0) lo = mid; else hi = mid;
      ++bisect;
    }
    lam = 0.5 * (lo + hi);
    if (hi - lo > 1e-9 * std::max(1.0, hi))
      throw std::runtime_error("profile projection: root finder failed to converge");
  }
  if (stats) {
    stats->newton_iterations = newton;
    stats->bisection_iterations = bisect;
  }
  return lam;
}

double clamp_sym(double v, double a) { return std::max(-a, std::min(a, v)); }

}  // namespace

CurvatureModel CurvatureModel::make(CurvatureKind kind, double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("curvature weight alpha must be > 0");
  return CurvatureModel{kind, alpha};
}

CurvatureKind parse_curvature_kind(std::string_view name) {
  if (name == "tac") return CurvatureKind::tac;
  if (name == "trv") return CurvatureKind::trv;
  if (name == "tsc") return CurvatureKind::tsc;
  throw std::invalid_argument("unknown curvature model '" + std::string(name) + "' (expected tac, trv or tsc)");
}

std::string to_string(CurvatureKind kind) {
  switch (kind) {
    case CurvatureKind::tac: return "tac";
    case CurvatureKind::trv: return "trv";
    case CurvatureKind::tsc: return "tsc";
  }
  return "?";
}

double f_eval(const CurvatureModel& m, double t) {
  switch (m.kind) {
    case CurvatureKind::tac: return 1.0 + m.alpha * std::abs(t);
    case CurvatureKind::trv: return std::sqrt(1.0 + m.alpha * m.alpha * t * t);
    case CurvatureKind::tsc: return 1.0 + m.alpha * m.alpha * t * t;
  }
  return kInf;
}

double conjugate_eval(const CurvatureModel& m, double s) {
  const double a = m.alpha;
  switch (m.kind) {
    case CurvatureKind::tac: return std::abs(s) <= a ? -1.0 : kInf;
    case CurvatureKind::trv: return std::abs(s) <= a ? -std::sqrt(1.0 - (s / a) * (s / a)) : kInf;
    case CurvatureKind::tsc: return (s / (2.0 * a)) * (s / (2.0 * a)) - 1.0;
  }
  return kInf;
}

double h_aligned(const CurvatureModel& m, double s, double t) {
  if (s < 0.0) return kInf;
  const double a = m.alpha;
  switch (m.kind) {
    case CurvatureKind::tac: return s + a * std::abs(t);
    case CurvatureKind::trv: return std::hypot(s, a * t);
    case CurvatureKind::tsc:
      if (s > 0.0) return s + a * a * t * t / s;
      return t == 0.0 ? 0.0 : kInf;  // recession function of f3
  }
  return kInf;
}

double h_eval(const CurvatureModel& m, double theta, const Vec3& p) {
  const double c = std::cos(theta), s = std::sin(theta);
  const double norm_x = std::hypot(p[0], p[1]);
  const double along = p[0] * c + p[1] * s;
  const double across = -p[0] * s + p[1] * c;
  if (std::abs(across) > 1e-12 * norm_x || along < -1e-12 * norm_x) return kInf;
  return h_aligned(m, norm_x, p[2]);
}

double profile_violation(const CurvatureModel& m, const ProfilePoint& eta) {
  const double x = eta.xi_x_theta, t = eta.xi_theta, a = m.alpha;
  switch (m.kind) {
    case CurvatureKind::tac: return std::max({0.0, x - 1.0, std::abs(t) - a});
    case CurvatureKind::trv: {
      const double r = t / a;
      return std::max({0.0, std::abs(t) - a, x - std::sqrt(std::max(0.0, 1.0 - r * r))});
    }
    case CurvatureKind::tsc: return std::max(0.0, x + (t / (2.0 * a)) * (t / (2.0 * a)) - 1.0);
  }
  return kInf;
}

namespace detail {

// Both multipliers are roots of low-degree polynomials (a quartic for TRV, a
// cubic for TSC). Newton runs on the equivalent secular equations below,
// which have the same positive root but are close to linear for large lambda,
// so the iteration started at lambda = 1e3 does not crawl through the region
// where the polynomial is dominated by its leading term.

double trv_multiplier(double x, double t, double alpha, ProjectionStats* stats) {
  // 1 - 1/r(lambda) with r^2 = (x/B)^2 + (t/A)^2, A = alpha + 2 lambda/alpha, B = 1 + 2 lambda.
  const double x2 = x * x, t2 = t * t;
  auto secular = [&](double l) {
    const double A = alpha + 2.0 * l / alpha;
    const double B = 1.0 + 2.0 * l;
    const double r2 = x2 / (B * B) + t2 / (A * A);
    const double dr2 = -4.0 * x2 / (B * B * B) - 4.0 * t2 / (alpha * A * A * A);
    const double r = std::sqrt(r2);
    return std::array<double, 3>{1.0 - 1.0 / r, dr2 / (2.0 * r2 * r), 1.0 + 1.0 / r};
  };
  return positive_root(secular, stats);
}

double tsc_multiplier(double x, double t, double alpha, ProjectionStats* stats) {
  // (x - 1 - lambda) + (alpha t)^2 / (2 alpha^2 + lambda)^2
  const double a2 = alpha * alpha;
  const double c = a2 * t * t;
  auto secular = [&](double l) {
    const double C = 2.0 * a2 + l;
    const double q = c / (C * C);
    return std::array<double, 3>{x - 1.0 - l + q, -1.0 - 2.0 * q / C, std::abs(x - 1.0) + l + q};
  };
  return positive_root(secular, stats);
}

}  // namespace detail

ProfilePoint project_profile(const CurvatureModel& m, ProfilePoint eta, ProjectionStats* stats) {
  if (stats) *stats = {};
  const double x = eta.xi_x_theta, t = eta.xi_theta, a = m.alpha;
  switch (m.kind) {
    case CurvatureKind::tac:
      return {std::min(1.0, x), clamp_sym(t, a)};

    case CurvatureKind::trv: {
      const double xp = std::max(0.0, x);
      if (xp * xp + (t / a) * (t / a) <= 1.0) return eta;
      if (x <= 0.0) return {x, clamp_sym(t, a)};
      if (a == 1.0) {
        const double r = std::hypot(x, t);
        return {x / r, t / r};
      }
      const double lam = detail::trv_multiplier(x, t, a, stats);
      return {x / (1.0 + 2.0 * lam), t / (1.0 + 2.0 * lam / (a * a))};
    }

    case CurvatureKind::tsc: {
      if (x + (t / (2.0 * a)) * (t / (2.0 * a)) <= 1.0) return eta;
      const double lam = detail::tsc_multiplier(x, t, a, stats);
      return {x - lam, t / (1.0 + lam / (2.0 * a * a))};
    }
  }
  return eta;
}

Vec3 project_H(const CurvatureModel& m, double cos_t, double sin_t, const Vec3& eta, ProjectionStats* stats) {
  const double along = eta[0] * cos_t + eta[1] * sin_t;
  const ProfilePoint p = project_profile(m, {along, eta[2]}, stats);
  const double shift = along - p.xi_x_theta;
  return {eta[0] - cos_t * shift, eta[1] - sin_t * shift, p.xi_theta};
}

Vec3 project_H(const CurvatureModel& m, double theta, const Vec3& eta) {
  return project_H(m, std::cos(theta), std::sin(theta), eta);
}

double h_violation(const CurvatureModel& m, double theta, const Vec3& xi) {
  return profile_violation(m, {xi[0] * std::cos(theta) + xi[1] * std::sin(theta), xi[2]});
}

double support_gap(const CurvatureModel& m, double theta, const Vec3& p, const Vec3& xi) {
  const double size = std::max({1.0, std::abs(xi[0]), std::abs(xi[1]), std::abs(xi[2])});
  if (h_violation(m, theta, xi) > 1e-9 * size * size) throw std::invalid_argument("support_gap: xi is not in H(theta)");
  const double h = h_eval(m, theta, p);
  if (!std::isfinite(h)) throw std::invalid_argument("support_gap: h(theta, p) is infinite");
  return h - (xi[0] * p[0] + xi[1] * p[1] + xi[2] * p[2]);
}

double growth_constant(const CurvatureModel& m) {
  const double a = m.alpha;
  switch (m.kind) {
    case CurvatureKind::tac:
    case CurvatureKind::trv:
      return std::min(1.0, a);
    case CurvatureKind::tsc: {
      // min over u = 1 + t^2 >= 1 of (1 - a^2)/sqrt(u) + a^2 sqrt(u)
      const double q = a * a;
      return q >= 0.5 ? 1.0 : 2.0 * std::sqrt(q * (1.0 - q));
    }
  }
  return 0.0;
}

}  // namespace rtv
