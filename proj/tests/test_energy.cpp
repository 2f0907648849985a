#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "rtv/energy.hpp"
#include "rtv/operators.hpp"
#include "support.hpp"

using namespace rtv;

namespace {

const double kPi = std::numbers::pi;

CurvatureModel model(CurvatureKind k, double a) { return CurvatureModel::make(k, a); }

// Random field whose spatial part is a nonnegative multiple of e(theta_k).
AveragedField random_aligned(const GridSpec& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> s(0.0, 2.0), t(-3.0, 3.0);
  AveragedField f(g);
  for (int k = 0; k < g.ntheta; ++k)
    for (int j = 0; j < g.n2 - 1; ++j)
      for (int i = 0; i < g.n1 - 1; ++i) {
        const double r = s(rng);
        f.values[g.volume(i, j, k)] = {r * std::cos(g.theta(k)), r * std::sin(g.theta(k)), t(rng)};
      }
  return f;
}

}  // namespace

TEST_CASE("energy of simple fields") {
  const GridSpec g = GridSpec::make(4, 3, 8, 0.5);
  for (CurvatureKind k : {CurvatureKind::tac, CurvatureKind::trv, CurvatureKind::tsc}) {
    CHECK(discrete_energy(FluxField(g), model(k, 2.0)) == 0.0);
  }
  const Diagnostics zero = diagnostics(AveragedField(g));
  CHECK(zero.h_tv == 0.0);
  CHECK(zero.h_ac == 0.0);
  CHECK(zero.h_sc == 0.0);

  AveragedField one(g);
  const int k = 3;
  one.values[g.volume(1, 1, k)] = {std::cos(g.theta(k)), std::sin(g.theta(k)), 0.0};
  const double cell = g.dx * g.dx * g.dtheta;
  CHECK(lifted_energy(one, model(CurvatureKind::tsc, 1.0)) == doctest::Approx(cell));
  CHECK(misalignment_norm(one) < 1e-15);

  // Misaligned field: only the aligned positive part is charged.
  AveragedField off(g);
  off.values[g.volume(0, 0, 0)] = {-1.0, 2.0, 0.0};
  CHECK(lifted_energy(off, model(CurvatureKind::tac, 1.0)) == 0.0);
  CHECK(misalignment_norm(off) == doctest::Approx(3.0));
  off.values[g.volume(0, 0, 0)] = {-1.0, 2.0, 0.5};
  CHECK(lifted_energy(off, model(CurvatureKind::tac, 1.0)) == doctest::Approx(0.5 * cell));
  CHECK(std::isinf(lifted_energy(off, model(CurvatureKind::tsc, 1.0))));

  const Diagnostics d = diagnostics(off);
  CHECK(d.sc_singular == 0);
  CHECK(d.h_tv == doctest::Approx(std::sqrt(5.0) * cell));
  CHECK(d.h_ac == doctest::Approx(0.5 * cell));
  CHECK(d.h_sc == doctest::Approx(0.25 / std::sqrt(5.0) * cell));
  off.values[g.volume(0, 0, 0)] = {0.0, 0.0, 0.5};
  CHECK(diagnostics(off).sc_singular == 1);
  CHECK(diagnostics(off).h_sc == 0.0);
}

TEST_CASE("discrete energy is the lifted energy of the face average") {
  std::mt19937_64 rng(2);
  const GridSpec g = GridSpec::make(6, 5, 8);
  const FluxField s = test::random_flux(g, rng);
  const CurvatureModel m = model(CurvatureKind::trv, 1.5);
  CHECK(discrete_energy(s, m) == lifted_energy(apply_averaging(s, g), m));
}

TEST_CASE("energy equals the sum of h on aligned fields") {
  std::mt19937_64 rng(9);
  const GridSpec g = GridSpec::make(5, 6, 16, 0.7);
  const AveragedField f = random_aligned(g, rng);
  for (const CurvatureModel& m : {model(CurvatureKind::tac, 0.4), model(CurvatureKind::trv, 3.0),
                                  model(CurvatureKind::tsc, 0.3), model(CurvatureKind::tsc, 5.0)}) {
    double sum = 0.0;
    for (int k = 0; k < g.ntheta; ++k)
      for (int j = 0; j < g.n2 - 1; ++j)
        for (int i = 0; i < g.n1 - 1; ++i) {
          const double h = h_eval(m, g.theta(k), f.values[g.volume(i, j, k)]);
          sum += h;
          // Per-volume growth bound.
          const Vec3& p = f.values[g.volume(i, j, k)];
          CHECK(h >= growth_constant(m) * std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]) - 1e-12);
        }
    const double cell = g.dx * g.dx * g.dtheta;
    CHECK(lifted_energy(f, m) == doctest::Approx(cell * sum).epsilon(1e-12));
    CHECK(lifted_energy(f, m) >= growth_constant(m) * field_mass(f) - 1e-8);
  }
}

TEST_CASE("diagnostics are invariant under relabelling orientations") {
  std::mt19937_64 rng(4);
  const GridSpec g = GridSpec::make(5, 4, 8);
  const AveragedField f = test::random_averaged(g, rng);
  AveragedField r(g);
  for (int k = 0; k < g.ntheta; ++k)
    for (int j = 0; j < g.n2 - 1; ++j)
      for (int i = 0; i < g.n1 - 1; ++i) r.values[g.volume(i, j, (k + 3) % g.ntheta)] = f.values[g.volume(i, j, k)];
  const Diagnostics a = diagnostics(f), b = diagnostics(r);
  CHECK(a.h_tv == doctest::Approx(b.h_tv).epsilon(1e-14));
  CHECK(a.h_ac == doctest::Approx(b.h_ac).epsilon(1e-14));
  CHECK(a.h_sc == doctest::Approx(b.h_sc).epsilon(1e-14));
}

TEST_CASE("curve energy") {
  SUBCASE("circle identities") {
    const double r = 10.0;
    const ParametricCurve c = regular_polygon(256, r);
    CHECK(curve_energy(c, model(CurvatureKind::tsc, 10.0)) == doctest::Approx(2 * kPi * (r + 100.0 / r)).epsilon(1e-3));
    CHECK(curve_energy(c, model(CurvatureKind::tac, 3.0)) == doctest::Approx(2 * kPi * (r + 3.0)).epsilon(1e-3));
    CHECK(curve_energy(c, model(CurvatureKind::trv, 4.0)) == doctest::Approx(2 * kPi * std::hypot(r, 4.0)).epsilon(1e-3));
  }
  SUBCASE("straight segment") {
    ParametricCurve seg{{{0, 0}, {1, 1}, {2, 2}, {3, 3}}, false};
    for (CurvatureKind k : {CurvatureKind::tac, CurvatureKind::trv, CurvatureKind::tsc})
      CHECK(curve_energy(seg, model(k, 7.0)) == doctest::Approx(3 * std::sqrt(2.0)));
  }
  SUBCASE("square with TAC matches rounded-corner refinements") {
    const double s = 2.5;
    ParametricCurve sq{{{0, 0}, {s, 0}, {s, s}, {0, s}}, true};
    const double exact = 4 * s + 2 * kPi;
    CHECK(curve_energy(sq, model(CurvatureKind::tac, 1.0)) == doctest::Approx(exact));
    // Corners replaced by quarter arcs of radius rho, each sampled with m segments.
    double prev_err = 1e9;
    for (double rho : {0.4, 0.1, 0.01}) {
      ParametricCurve fine{{}, true};
      const std::array<std::array<double, 2>, 4> centers{{{s - rho, rho}, {s - rho, s - rho}, {rho, s - rho}, {rho, rho}}};
      for (int c = 0; c < 4; ++c)
        for (int q = 0; q <= 16; ++q) {
          const double a = (c - 1) * kPi / 2 + q * (kPi / 2) / 16;
          fine.samples.push_back({centers[c][0] + rho * std::cos(a), centers[c][1] + rho * std::sin(a)});
        }
      const double err = std::abs(curve_energy(fine, model(CurvatureKind::tac, 1.0)) - exact);
      CHECK(err < prev_err);
      prev_err = err;
    }
    CHECK(prev_err < 0.05);
  }
  SUBCASE("TSC circle energy is minimized at r = alpha") {
    const double alpha = 10.0;
    int best = 0;
    double best_e = 1e300;
    for (int r = 5; r <= 15; ++r) {
      const double e = curve_energy(regular_polygon(256, r), model(CurvatureKind::tsc, alpha));
      CHECK(e >= 4 * kPi * alpha * (1 - 1e-3));
      if (e < best_e) best_e = e, best = r;
    }
    CHECK(best == 10);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(curve_energy(ParametricCurve{{{0, 0}, {1, 0}}, true}, model(CurvatureKind::tac, 1)), std::invalid_argument);
    CHECK_THROWS_AS(curve_energy(ParametricCurve{{{0, 0}, {0, 0}, {1, 0}}, false}, model(CurvatureKind::tac, 1)),
                    std::invalid_argument);
    CHECK_THROWS_AS(regular_polygon(2, 1.0), std::invalid_argument);
  }
}
