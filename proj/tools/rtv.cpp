// rtv: command-line front end for the lifted curvature solver.
//
//   rtv disk     [--ntheta 64 --alpha 10 ...]
//   rtv complete --input shape.png --mask mask.png [--field-mask dip.png]
//   rtv shapereg --input shape.png --lambda 4
//   rtv inpaint  --input img.png (--mask m.png | --remove-lines 0.8 | --remove-pixels 0.9)
//   rtv denoise  --input img.png --noise salt-pepper --noise-level 0.25 --lambda 7
//
// Exit status: 0 converged, 2 stopped at --iters, 1 error.

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <iostream>
#include <map>
#include <string>

#include "rtv/experiments.hpp"

namespace {

struct Options {
  std::string model = "tsc";
  double alpha = 10.0;
  int ntheta = 32;
  double lambda = 1.0;
  long iters = 20000;
  long check_every = 100;
  double tol_div = 1e-3;
  double tol_cons = 1e-3;
  double energy_rtol = 1e-6;
  double step_balance = rtv::SolverConfig{}.step_balance;
  std::uint64_t seed = 0;
  std::string input, output, input_copy, mask, field_mask, report, export_field;
  int disk_n = 40;
  double disk_r = 10.0, disk_band = 10.0;
  std::string noise = "none";
  double noise_level = 0.0;
  std::string data;
  double remove_lines = 0.0, remove_pixels = 0.0;
  bool pin_border = false;
  bool quiet = false;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--model", o.model, "Curvature model")
      ->check(CLI::IsMember({"tac", "trv", "tsc"}))
      ->capture_default_str();
  cmd->add_option("--alpha", o.alpha, "Curvature weight alpha > 0")->capture_default_str();
  cmd->add_option("--ntheta", o.ntheta, "Number of discrete orientations")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--lambda", o.lambda, "Data term weight")->capture_default_str();
  cmd->add_option("--iters", o.iters, "Maximum number of iterations")->check(CLI::NonNegativeNumber)->capture_default_str();
  cmd->add_option("--check-every", o.check_every, "Iterations between convergence checks")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--tol-div", o.tol_div, "Tolerance on |D sigma|_inf")->capture_default_str();
  cmd->add_option("--tol-cons", o.tol_cons, "Tolerance on |P sigma - G u|_inf")->capture_default_str();
  cmd->add_option("--energy-rtol", o.energy_rtol, "Relative energy change counted as stagnation")->capture_default_str();
  cmd->add_option("--step-balance", o.step_balance, "Primal/dual step balance factor")->capture_default_str();
  cmd->add_option("--seed", o.seed, "Seed for generated noise and masks")->capture_default_str();
  cmd->add_option("--output,-o", o.output, "Result image (.png or .pgm)");
  cmd->add_option("--report", o.report, "Convergence CSV");
  cmd->add_option("--export-field", o.export_field, "CSV export of the averaged lifted field");
  cmd->add_option("--field-mask", o.field_mask, "Pixels (>= 128) whose shared facets carry no spatial flux");
  cmd->add_flag("--pin-border", o.pin_border, "No flux through the image border (u must be constant there)");
  cmd->add_flag("--quiet,-q", o.quiet, "Print only the diagnostics line");
}

rtv::ExperimentSpec to_spec(rtv::ExperimentKind kind, const Options& o) {
  rtv::ExperimentSpec s;
  s.kind = kind;
  s.model = rtv::CurvatureModel::make(rtv::parse_curvature_kind(o.model), o.alpha);
  s.ntheta = o.ntheta;
  s.lambda = o.lambda;
  s.seed = o.seed;
  s.disk_n = o.disk_n;
  s.disk_r = o.disk_r;
  s.disk_band = o.disk_band;
  s.input_path = o.input;
  s.mask_path = o.mask;
  s.field_mask_path = o.field_mask;
  s.remove_lines = o.remove_lines;
  s.remove_pixels = o.remove_pixels;
  if (o.noise == "gaussian") s.noise = {rtv::NoiseKind::gaussian, o.noise_level};
  if (o.noise == "salt-pepper") s.noise = {rtv::NoiseKind::salt_pepper, o.noise_level};
  if (o.data == "l1") s.denoise_data = rtv::DataKind::l1;
  if (o.data == "l2") s.denoise_data = rtv::DataKind::l2;
  s.pin_border = o.pin_border;
  s.output_path = o.output;
  s.report_path = o.report;
  s.export_path = o.export_field;
  s.input_copy_path = o.input_copy;
  s.solver.max_iters = o.iters;
  s.solver.check_every = o.check_every;
  s.solver.tol_div = o.tol_div;
  s.solver.tol_consistency = o.tol_cons;
  s.solver.energy_rtol = o.energy_rtol;
  s.solver.step_balance = o.step_balance;
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Curvature regularisation by lifted divergence-free fields"};
  app.require_subcommand(1);
  std::map<std::string, Options> opts;
  std::map<CLI::App*, rtv::ExperimentKind> kinds;

  auto sub = [&](const char* name, const char* help, rtv::ExperimentKind kind) {
    CLI::App* cmd = app.add_subcommand(name, help);
    Options& o = opts[name];
    add_common(cmd, o);
    kinds[cmd] = kind;
    return std::pair<CLI::App*, Options*>{cmd, &o};
  };

  {
    auto [cmd, o] = sub("disk", "Disk benchmark: TSC inpainting of an annulus band", rtv::ExperimentKind::disk);
    cmd->add_option("--n", o->disk_n, "Image size in pixels")->capture_default_str();
    cmd->add_option("--radius", o->disk_r, "Disk radius in pixels")->capture_default_str();
    cmd->add_option("--band", o->disk_band, "Width of the unknown band")->capture_default_str();
    cmd->add_option("--mask", o->mask, "Ignored for disk (the band is generated)");
  }
  {
    auto [cmd, o] = sub("complete", "Shape completion of the unknown region of a mask", rtv::ExperimentKind::complete);
    cmd->add_option("--input,-i", o->input, "Input image")->required();
    cmd->add_option("--mask", o->mask, "Mask (255 = known, 0 = unknown)")->required();
  }
  {
    auto [cmd, o] = sub("shapereg", "Shape regularisation with a force field lambda (1/2 - u0)", rtv::ExperimentKind::shapereg);
    cmd->add_option("--input,-i", o->input, "Input shape image")->required();
    cmd->add_option("--mask", o->mask, "Unused");
  }
  {
    auto [cmd, o] = sub("inpaint", "Image inpainting", rtv::ExperimentKind::inpaint);
    cmd->add_option("--input,-i", o->input, "Input image")->required();
    cmd->add_option("--mask", o->mask, "Mask (255 = known, 0 = unknown)");
    cmd->add_option("--remove-lines", o->remove_lines, "Remove this fraction of rows instead of reading a mask");
    cmd->add_option("--remove-pixels", o->remove_pixels, "Remove this fraction of pixels instead of reading a mask");
    cmd->add_option("--save-input", o->input_copy, "Write the masked input image");
  }
  {
    auto [cmd, o] = sub("denoise", "Image denoising", rtv::ExperimentKind::denoise);
    cmd->add_option("--input,-i", o->input, "Input image")->required();
    cmd->add_option("--mask", o->mask, "Unused");
    cmd->add_option("--noise", o->noise, "Noise added before denoising")
        ->check(CLI::IsMember({"none", "gaussian", "salt-pepper"}))
        ->capture_default_str();
    cmd->add_option("--noise-level", o->noise_level, "Standard deviation or corrupted fraction");
    cmd->add_option("--data", o->data, "Data term (default: l1 for salt-pepper, l2 otherwise)")
        ->check(CLI::IsMember({"l1", "l2"}));
    cmd->add_option("--save-input", o->input_copy, "Write the noisy input image");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    CLI::App* cmd = app.get_subcommands().front();
    const Options& o = opts[cmd->get_name()];
    rtv::ExperimentSpec spec = to_spec(kinds[cmd], o);
    if (spec.kind == rtv::ExperimentKind::disk) spec.mask_path.clear();
    if (spec.kind == rtv::ExperimentKind::shapereg || spec.kind == rtv::ExperimentKind::denoise) spec.mask_path.clear();

    const rtv::Problem probe = rtv::build_problem(spec);
    if (rtv::fully_unconstrained(probe.term))
      std::cerr << "warning: the data term constrains no pixel; the result is only determined up to constants "
                   "and checkerboard patterns\n";

    const rtv::ExperimentOutcome out = rtv::run(spec);
    const auto& rep = out.result.report;
    if (!o.quiet) {
      const auto& last = rep.rows.back();
      std::printf("%s: %s, alpha=%g, ntheta=%d, %dx%d pixels\n", rtv::to_string(spec.kind).c_str(),
                  rtv::to_string(spec.model.kind).c_str(), spec.model.alpha, spec.ntheta, out.problem.grid.n1,
                  out.problem.grid.n2);
      std::printf("iterations=%ld converged=%s div_res=%.3e cons_res=%.3e\n", rep.iterations,
                  rep.converged ? "yes" : "no", last.div_res, last.cons_res);
      std::printf("energy=%.10g data=%.10g\n", out.lifted, out.data);
    }
    std::printf("%s\n", out.diagnostics_line().c_str());
    return rep.converged ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
