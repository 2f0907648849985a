#include "rtv/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numeric>
#include <random>
#include <stdexcept>

#include "rtv/io.hpp"
#include "rtv/operators.hpp"

namespace rtv {

DiskProblem make_disk_problem(int n, double r, double band, double alpha, int ntheta) {
  if (!(band >= 0.0)) throw std::invalid_argument("disk band must be >= 0");
  if (!(r > 0.5 * band)) throw std::invalid_argument("disk band must leave a known centre (band/2 < r)");
  if (!(r + 0.5 * band <= 0.5 * n)) throw std::invalid_argument("disk band does not fit in the grid");
  DiskProblem p;
  p.grid = GridSpec::make(n, n, ntheta);
  p.model = CurvatureModel::make(CurvatureKind::tsc, alpha);
  p.u0 = Image(n, n);
  p.unknown = PixelMask(n, n);
  const double c = 0.5 * n;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double d = std::hypot(i + 0.5 - c, j + 0.5 - c);
      if (d < r - 0.5 * band)
        p.u0(i, j) = 1.0;
      else if (d <= r + 0.5 * band && band > 0.0)
        p.unknown.set(i, j, true);
    }
  return p;
}

Image add_noise(const Image& img, const NoiseSpec& noise, std::uint64_t seed) {
  Image out = img;
  std::mt19937_64 rng(seed);
  switch (noise.kind) {
    case NoiseKind::none:
      break;
    case NoiseKind::gaussian: {
      if (!(noise.level >= 0.0)) throw std::invalid_argument("noise deviation must be >= 0");
      if (noise.level == 0.0) break;
      std::normal_distribution<double> gauss(0.0, noise.level);
      for (double& v : out.values) v = std::clamp(v + gauss(rng), 0.0, 1.0);
      break;
    }
    case NoiseKind::salt_pepper: {
      if (!(noise.level >= 0.0 && noise.level <= 1.0)) throw std::invalid_argument("noise fraction must lie in [0, 1]");
      std::vector<std::size_t> idx(out.size());
      std::iota(idx.begin(), idx.end(), std::size_t(0));
      std::shuffle(idx.begin(), idx.end(), rng);
      const auto count = std::size_t(std::llround(noise.level * double(out.size())));
      std::bernoulli_distribution coin(0.5);
      for (std::size_t n = 0; n < count; ++n) out.values[idx[n]] = coin(rng) ? 1.0 : 0.0;
      break;
    }
  }
  return out;
}

namespace {

std::vector<std::size_t> pick(std::size_t total, double fraction, std::uint64_t seed) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) throw std::invalid_argument("removal fraction must lie in [0, 1]");
  std::vector<std::size_t> idx(total);
  std::iota(idx.begin(), idx.end(), std::size_t(0));
  std::mt19937_64 rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);
  idx.resize(std::size_t(std::llround(fraction * double(total))));
  return idx;
}

}  // namespace

PixelMask line_removal_mask(int n1, int n2, double fraction, std::uint64_t seed) {
  PixelMask m(n1, n2);
  for (std::size_t row : pick(std::size_t(n2), fraction, seed))
    for (int i = 0; i < n1; ++i) m.set(i, int(row), true);
  return m;
}

PixelMask pixel_removal_mask(int n1, int n2, double fraction, std::uint64_t seed) {
  PixelMask m(n1, n2);
  for (std::size_t p : pick(std::size_t(n1) * n2, fraction, seed)) m.values[p] = 1;
  return m;
}

bool fully_unconstrained(const DataTerm& term) {
  return term.kind == DataKind::inpaint &&
         std::all_of(term.free_mask.values.begin(), term.free_mask.values.end(), [](auto v) { return v != 0; });
}

ExperimentKind parse_experiment_kind(const std::string& name) {
  if (name == "disk") return ExperimentKind::disk;
  if (name == "complete") return ExperimentKind::complete;
  if (name == "shapereg") return ExperimentKind::shapereg;
  if (name == "inpaint") return ExperimentKind::inpaint;
  if (name == "denoise") return ExperimentKind::denoise;
  throw std::invalid_argument("unknown experiment '" + name + "'");
}

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::disk: return "disk";
    case ExperimentKind::complete: return "complete";
    case ExperimentKind::shapereg: return "shapereg";
    case ExperimentKind::inpaint: return "inpaint";
    case ExperimentKind::denoise: return "denoise";
  }
  return "?";
}

void ExperimentSpec::validate() const {
  auto must_exist = [](const std::string& path, const char* what) {
    if (!path.empty() && !std::filesystem::exists(path))
      throw std::invalid_argument(std::string(what) + " '" + path + "' does not exist");
  };
  if (ntheta < 1) throw std::invalid_argument("ntheta must be >= 1");
  if (kind != ExperimentKind::disk && input_path.empty())
    throw std::invalid_argument(to_string(kind) + " needs an input image");
  if (kind == ExperimentKind::complete && mask_path.empty())
    throw std::invalid_argument("complete needs a mask");
  if (kind == ExperimentKind::inpaint && mask_path.empty() && remove_lines == 0.0 && remove_pixels == 0.0)
    throw std::invalid_argument("inpaint needs a mask or a removal fraction");
  if ((kind == ExperimentKind::shapereg || kind == ExperimentKind::denoise) && !(lambda > 0.0))
    throw std::invalid_argument("lambda must be > 0");
  must_exist(input_path, "input image");
  must_exist(mask_path, "mask");
  must_exist(field_mask_path, "field mask");
  solver.validate();
}

Problem build_problem(const ExperimentSpec& spec) {
  spec.validate();
  Problem p;
  if (spec.kind == ExperimentKind::disk) {
    const DiskProblem d = make_disk_problem(spec.disk_n, spec.disk_r, spec.disk_band, spec.model.alpha, spec.ntheta);
    p.grid = d.grid;
    p.term = DataTerm::inpaint(d.u0, d.unknown);
  } else {
    Image img = read_image(spec.input_path);
    p.grid = GridSpec::make(img.n1, img.n2, spec.ntheta);
    PixelMask unknown;
    if (!spec.mask_path.empty()) {
      unknown = read_inpainting_mask(spec.mask_path);
      check_shape(unknown, p.grid, "mask");
    }
    switch (spec.kind) {
      case ExperimentKind::complete:
        p.term = DataTerm::inpaint(img, unknown);
        break;
      case ExperimentKind::inpaint:
        if (unknown.values.empty()) {
          unknown = spec.remove_lines > 0.0 ? line_removal_mask(img.n1, img.n2, spec.remove_lines, spec.seed)
                                            : pixel_removal_mask(img.n1, img.n2, spec.remove_pixels, spec.seed);
        }
        for (std::size_t q = 0; q < img.size(); ++q)
          if (unknown.values[q]) img.values[q] = 0.0;
        p.term = DataTerm::inpaint(img, unknown);
        break;
      case ExperimentKind::shapereg:
        p.term = DataTerm::force_box(img, spec.lambda);
        break;
      case ExperimentKind::denoise: {
        Image noisy = add_noise(img, spec.noise, spec.seed);
        const DataKind dk = spec.denoise_data.value_or(spec.noise.kind == NoiseKind::salt_pepper ? DataKind::l1
                                                                                                 : DataKind::l2);
        if (dk == DataKind::l1)
          p.term = DataTerm::l1(noisy, spec.lambda);
        else if (dk == DataKind::l2)
          p.term = DataTerm::l2(noisy, spec.lambda);
        else
          throw std::invalid_argument("denoise supports the l1 and l2 data terms only");
        break;
      }
      case ExperimentKind::disk:
        break;
    }
  }
  if (!spec.field_mask_path.empty()) {
    const PixelMask marked = read_marker_mask(spec.field_mask_path);
    check_shape(marked, p.grid, "field mask");
    p.field_mask = FacetMask::from_pixels(marked);
  }
  if (spec.pin_border || spec.kind == ExperimentKind::disk) {
    FacetMask b = FacetMask::border(p.grid.n1, p.grid.n2);
    if (p.field_mask)
      p.field_mask->merge(b);
    else
      p.field_mask = b;
  }
  p.start = initial_guess(p.term);
  return p;
}

std::string ExperimentOutcome::diagnostics_line() const {
  char buf[160];
  std::snprintf(buf, sizeof buf, "H_TV=%.10g H_AC=%.10g H_SC=%.10g", diag.h_tv, diag.h_ac, diag.h_sc);
  return buf;
}

ExperimentOutcome run(const ExperimentSpec& spec) {
  ExperimentOutcome out;
  out.problem = build_problem(spec);
  SolverConfig cfg = spec.solver;
  cfg.seed = spec.seed;
  if (out.problem.field_mask) {
    if (cfg.field_mask)
      cfg.field_mask->merge(*out.problem.field_mask);
    else
      cfg.field_mask = out.problem.field_mask;
  }
  const Problem& p = out.problem;
  if (!spec.input_copy_path.empty()) write_image(p.term.reference, spec.input_copy_path);
  out.result = solve(p.start, p.grid, spec.model, p.term, cfg);
  const AveragedField sh = apply_averaging(out.result.sigma(), p.grid);
  out.diag = diagnostics(sh);
  out.lifted = lifted_energy(sh, spec.model);
  out.data = data_value(p.term, out.result.u());
  if (!spec.output_path.empty()) write_image(out.result.u(), spec.output_path);
  if (!spec.report_path.empty()) out.result.report.write_csv(spec.report_path);
  if (!spec.export_path.empty()) export_field(sh, p.grid, spec.export_path);
  return out;
}

}  // namespace rtv
