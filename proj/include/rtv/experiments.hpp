#pragma once

// Experiment set-ups (disk benchmark, shape completion, shape regularisation,
// inpainting, denoising) and a driver that runs one and writes its artifacts.

#include <cstdint>
#include <optional>
#include <string>

#include "rtv/curvature.hpp"
#include "rtv/data_terms.hpp"
#include "rtv/energy.hpp"
#include "rtv/grid.hpp"
#include "rtv/solver.hpp"

namespace rtv {

struct DiskProblem {
  GridSpec grid;
  Image u0;
  PixelMask unknown;  // the annulus band
  CurvatureModel model;
};

/// n x n image with centre (n/2, n/2); pixel (i, j) sits at (i+1/2, j+1/2).
/// u0 = 1 where the distance to the centre is below r - band/2, 0 beyond
/// r + band/2, and the band in between is unknown. TSC model with `alpha`.
/// Throws std::invalid_argument unless 0 <= band, band/2 < r and
/// r + band/2 <= n/2.
DiskProblem make_disk_problem(int n = 40, double r = 10.0, double band = 10.0, double alpha = 10.0, int ntheta = 32);

enum class NoiseKind { none, gaussian, salt_pepper };

struct NoiseSpec {
  NoiseKind kind = NoiseKind::none;
  double level = 0.0;  // standard deviation, or the fraction of corrupted pixels
};

/// Gaussian: adds N(0, level^2) and clamps to [0, 1]. Salt and pepper:
/// round(level * pixels) distinct pixels are set to 0 or 1 with equal
/// probability. Deterministic for a given seed. Throws std::invalid_argument
/// for a negative deviation or a fraction outside [0, 1].
Image add_noise(const Image& img, const NoiseSpec& noise, std::uint64_t seed);

/// Unknown-pixel masks removing round(fraction * n2) whole rows, or
/// round(fraction * n1 * n2) single pixels, chosen uniformly.
PixelMask line_removal_mask(int n1, int n2, double fraction, std::uint64_t seed);
PixelMask pixel_removal_mask(int n1, int n2, double fraction, std::uint64_t seed);

/// True when the data term constrains no pixel at all (inpainting with every
/// pixel unknown), leaving u determined only up to the kernel of G.
bool fully_unconstrained(const DataTerm& term);

enum class ExperimentKind { disk, complete, shapereg, inpaint, denoise };

ExperimentKind parse_experiment_kind(const std::string& name);
std::string to_string(ExperimentKind kind);

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::disk;
  CurvatureModel model;
  int ntheta = 32;
  double lambda = 1.0;  // data weight for shapereg / denoise
  std::uint64_t seed = 0;

  // disk
  int disk_n = 40;
  double disk_r = 10.0;
  double disk_band = 10.0;

  // inputs
  std::string input_path;
  std::string mask_path;        // 255 = known, 0 = unknown
  std::string field_mask_path;  // marked pixels: facets between two marked pixels carry no flux
  double remove_lines = 0.0;    // inpaint without a mask file
  double remove_pixels = 0.0;
  NoiseSpec noise;              // denoise: noise added to the input first
  std::optional<DataKind> denoise_data;  // default: l1 for salt and pepper, l2 otherwise
  bool pin_border = false;      // always on for disk

  // outputs (empty = skip)
  std::string output_path;
  std::string report_path;
  std::string export_path;
  std::string input_copy_path;  // the (noisy / masked) input actually used

  SolverConfig solver;

  /// Throws std::invalid_argument for missing inputs or files that do not exist.
  void validate() const;
};

struct Problem {
  GridSpec grid;
  DataTerm term;
  Image start;
  std::optional<FacetMask> field_mask;
};

/// Builds grid, data term and starting image for the spec. Reads input files.
Problem build_problem(const ExperimentSpec& spec);

struct ExperimentOutcome {
  Problem problem;
  SolveResult result;
  Diagnostics diag;
  double lifted = 0.0;   // discrete curvature energy
  double data = 0.0;     // G(u)

  /// "H_TV=... H_AC=... H_SC=..." with 10 significant digits.
  std::string diagnostics_line() const;
};

/// Builds the problem, solves it and writes the requested artifacts: the
/// result image (clamped to [0, 1]), the convergence CSV and the field export.
ExperimentOutcome run(const ExperimentSpec& spec);

}  // namespace rtv
