// ffkit: filter-function, space-curve, Magnus and control-extraction tool.

#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

void add_drive_options(CLI::App* cmd, ffkit::cli::DriveOptions& d) {
  cmd->add_option("drive", d.drive_file, "Drive file")->required();
  auto* periods = cmd->add_option("--periods", d.periods, "Number of drive periods (repeats for piecewise drives)");
  auto* time = cmd->add_option("--time", d.time, "Total duration in us");
  periods->excludes(time);
  cmd->add_option("--steps-per-period", d.steps_per_period, "Time steps per drive period")->capture_default_str();
  cmd->add_option("--threads", d.threads, "Worker threads (0: hardware concurrency)")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  namespace cli = ffkit::cli;
  CLI::App app{"Filter functions, space curves, Magnus terms and synchronous controls for driven qubits"};
  app.set_version_flag("--version", std::string(cli::kToolVersion));
  app.require_subcommand(1);

  cli::FfOptions ff;
  auto* c_ff = app.add_subcommand("ff", "Complex filter-function sweep (CSV, or JSON for a .json output)");
  add_drive_options(c_ff, ff.drive);
  c_ff->add_option("--axis", ff.axis, "Perturbation axis x|y|z")->capture_default_str();
  c_ff->add_option("--fmin", ff.fmin, "Lowest frequency, MHz")->capture_default_str();
  c_ff->add_option("--fmax", ff.fmax, "Highest frequency, MHz")->capture_default_str();
  c_ff->add_option("--df", ff.df, "Frequency step, MHz")->capture_default_str();
  c_ff->add_option("--format", ff.format, "csv|json (default from the output extension)");
  c_ff->add_option("--out", ff.out, "Output file (stdout if omitted)");

  cli::CurveOptions curve;
  auto* c_curve = app.add_subcommand("curve", "Space curve for a tone at frequency f and phase phi");
  add_drive_options(c_curve, curve.drive);
  c_curve->add_option("--axis", curve.axis, "Perturbation axis x|y|z")->capture_default_str();
  c_curve->add_option("--f", curve.f, "Tone frequency, MHz")->capture_default_str();
  c_curve->add_option("--phi", curve.phis, "Tone phase(s), degrees")->delimiter(',');
  c_curve->add_option("--out", curve.out, "Output CSV (one file per phase when several are given)");

  cli::MagnusOptions magnus;
  auto* c_magnus = app.add_subcommand("magnus", "Magnus expansion terms A_1..A_K");
  add_drive_options(c_magnus, magnus.drive);
  c_magnus->add_option("--axis", magnus.axis, "Perturbation axis x|y|z")->capture_default_str();
  c_magnus->add_option("--order", magnus.order, "Highest order K")->capture_default_str();
  c_magnus->add_option("--method", magnus.method, "auto|quadrature|taylor")->capture_default_str();
  c_magnus->add_option("--out", magnus.out, "Output JSON (stdout if omitted)");

  cli::ControlsOptions controls;
  auto* c_controls = app.add_subcommand("controls", "Synchronous control solutions from filter-function peaks");
  add_drive_options(c_controls, controls.drive);
  c_controls->add_option("--axis", controls.axis, "Perturbation axis x|y|z")->capture_default_str();
  c_controls->add_option("--min-gain", controls.min_gain, "Minimum peak gain |F_ij|")->capture_default_str();
  c_controls->add_option("--fmax", controls.fmax, "Highest frequency, MHz (default: 10 base harmonics)");
  c_controls->add_option("--points-per-harmonic", controls.points_per_harmonic, "Sweep resolution")
      ->capture_default_str();
  c_controls->add_option("--out", controls.out, "Output JSON (stdout if omitted)");

  cli::OptimizeOptions opt;
  auto* c_opt = app.add_subcommand("optimize", "Harmonic drive search cancelling Magnus terms");
  c_opt->add_option("config", opt.config_file, "Optimizer config file")->required();
  c_opt->add_option("--threads", opt.threads, "Parallel restarts (0: hardware concurrency)")->capture_default_str();
  c_opt->add_option("--out", opt.out, "Output JSON (stdout if omitted)");

  cli::VerifyOptions verify;
  auto* c_verify = app.add_subcommand("verify", "Check first-order predictions against full simulation");
  add_drive_options(c_verify, verify.drive);
  auto* cases = c_verify->add_option("--cases", verify.cases_file, "Cases file");
  auto* random = c_verify->add_option("--random", verify.random, "Number of random cases");
  cases->excludes(random);
  c_verify->add_option("--seed", verify.seed, "Seed for --random")->capture_default_str();
  c_verify->add_option("--out", verify.out, "Output JSON (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : cli::kInputError;
  }

  try {
    if (*c_ff) return cli::cmd_ff(ff);
    if (*c_curve) return cli::cmd_curve(curve);
    if (*c_magnus) return cli::cmd_magnus(magnus);
    if (*c_controls) return cli::cmd_controls(controls);
    if (*c_opt) return cli::cmd_optimize(opt);
    if (*c_verify) return cli::cmd_verify(verify);
  } catch (const ffkit::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kInputError;
  } catch (const ffkit::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return cli::kNumericalError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kNumericalError;
  }
  return cli::kInputError;
}
