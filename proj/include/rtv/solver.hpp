#pragma once

// Preconditioned primal-dual solver for
//
//   min_{sigma, u} max_{phi, psi, xi}  <phi, D sigma> + <psi, P sigma - G u>
//                                      + <xi, A sigma> - sum_j I_{H(theta_k)}(xi_j) + G(u)
//
// with diagonal steps tau (primal) and s (dual) built from the absolute row
// and column sums of the stacked operator K = [A; D; (P, -G)].

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rtv/curvature.hpp"
#include "rtv/data_terms.hpp"
#include "rtv/grid.hpp"

namespace rtv {

/// Spatial facets whose fluxes sigma^1 / sigma^2 are pinned to zero for every
/// orientation. Shapes follow the e1 / e2 edge sets: s1 has n1 x (n2-1)
/// entries, s2 has (n1-1) x n2.
struct FacetMask {
  int n1 = 0;
  int n2 = 0;
  std::vector<std::uint8_t> s1;
  std::vector<std::uint8_t> s2;

  FacetMask() = default;
  FacetMask(int n1_, int n2_)
      : n1(n1_), n2(n2_), s1(std::size_t(n1_) * (n2_ - 1), 0), s2(std::size_t(n1_ - 1) * n2_, 0) {}

  /// Pins every facet whose two adjacent pixels are both marked.
  static FacetMask from_pixels(const PixelMask& marked);

  /// Pins the facets on the outer boundary of the volume grid (s1 at i = 0
  /// and i = n1-1, s2 at j = 0 and j = n2-1), so no flux leaves the domain.
  /// Together with P sigma = G u this forces u to be constant along the
  /// image border.
  static FacetMask border(int n1, int n2);

  /// Union with another mask of the same size.
  FacetMask& merge(const FacetMask& other);

  std::size_t count() const;
};

struct SolverConfig {
  long max_iters = 20000;
  long check_every = 100;
  double tol_div = 1e-3;
  double tol_consistency = 1e-3;
  double energy_rtol = 1e-6;
  double overrelax = 1.0;
  double precond_power = 1.0;
  /// Primal steps are multiplied and dual steps divided by this factor; the
  /// product of the two, and hence the convergence condition, is unchanged.
  double step_balance = 0.01;
  std::uint64_t seed = 0;
  std::optional<FacetMask> field_mask;

  /// Throws std::invalid_argument on out-of-range values.
  void validate() const;
};

/// Diagonal step sizes, one entry per primal column / dual row. The xi rows
/// share one step per volume for all three components.
struct Preconditioners {
  std::vector<double> tau_s1, tau_s2, tau_st, tau_u;
  std::vector<double> sig_phi, sig_xi, sig_psi1, sig_psi2;
};

Preconditioners assemble_preconditioners(const GridSpec& g, double power = 1.0, double balance = 1.0);

struct SolverState {
  Image u, u_bar;
  FluxField sigma, sigma_bar;
  VolumeField phi;
  AveragedField xi;
  EdgeField psi;
  long iteration = 0;
};

/// sigma = 0, all duals = 0, u = u_bar = u0.
SolverState initial_state(const GridSpec& g, const Image& u0);

/// Squared Euclidean norms of the change of the primal and dual variables
/// during one iteration.
struct IterationGaps {
  double primal = 0.0;
  double dual = 0.0;
};

/// One primal-dual iteration in place. Gaps are measured only when requested.
IterationGaps iterate(SolverState& state, const Preconditioners& pre, const GridSpec& g, const CurvatureModel& model,
                      const DataTerm& term, const SolverConfig& config, bool measure_gaps = false);

struct ReportRow {
  long iter = 0;
  double energy = 0.0;          // discrete energy, may be +inf before alignment
  double div_res = 0.0;         // |D sigma|_inf
  double cons_res = 0.0;        // |P sigma - G u|_inf
  double primal_gap = 0.0;      // |x^{n+1} - x^n|_2 of the last iteration
  double dual_gap = 0.0;        // |y^{n+1} - y^n|_2 of the last iteration
  double dual_violation = 0.0;  // max_j distance of xi_j outside H(theta_k)
  double misalignment = 0.0;
};

struct ConvergenceReport {
  std::vector<ReportRow> rows;
  long iterations = 0;
  bool converged = false;

  /// CSV with header iter,energy,div_res,cons_res (one line per row).
  std::string to_csv() const;
  void write_csv(const std::string& path) const;
};

class SolverDiverged : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SolveResult {
  SolverState state;
  ConvergenceReport report;

  const Image& u() const { return state.u; }
  const FluxField& sigma() const { return state.sigma; }
};

/// Iterates until max_iters or until both residuals are below their
/// tolerances and the energy changed by at most energy_rtol (relative) at
/// each of the last two checks (or did not change at all). While the discrete energy is infinite the Lagrangian
/// term dx^2 dtheta <xi, A sigma> stands in for it. Throws SolverDiverged when
/// an iterate stops being finite.
SolveResult solve(const Image& u0, const GridSpec& g, const CurvatureModel& model, const DataTerm& term,
                  const SolverConfig& config);

/// Same, starting from initial_guess(term).
SolveResult solve(const GridSpec& g, const CurvatureModel& model, const DataTerm& term, const SolverConfig& config);

}  // namespace rtv
