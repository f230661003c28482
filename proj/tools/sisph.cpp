// Command-line entry point: run a benchmark case, list cases, or validate one.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <map>

#include "sisph/errors.hpp"
#include "sisph/harness/validation.hpp"
#include "sisph/parallel.hpp"

namespace {

constexpr int kUsageError = 2;
constexpr int kRuntimeError = 1;

struct CaseFlags {
  std::string name;
  sisph::harness::CaseOptions opts;
  std::string out_dir;
  int threads = 0;
  bool quiet = false;
};

void add_case_flags(CLI::App* cmd, CaseFlags& f) {
  static const std::map<std::string, sisph::PressureGradientForm> pgrad{
      {"symm", sisph::PressureGradientForm::symm}, {"asymm", sisph::PressureGradientForm::asymm}};
  static const std::map<std::string, sisph::UStarWallMode> ustar{{"slip", sisph::UStarWallMode::slip},
                                                                 {"noslip", sisph::UStarWallMode::noslip}};
  auto& o = f.opts;
  cmd->add_option("case", f.name, "Case name (see list-cases)")->required();
  cmd->add_option("--re", o.re, "Reynolds number");
  cmd->add_option("--n", o.n, "Particles per side");
  cmd->add_option("--dx", o.dx, "Particle spacing");
  cmd->add_option("--tol", o.tol, "PPE tolerance");
  cmd->add_option("--omega", o.omega, "PPE relaxation factor");
  cmd->add_option("--k-gtvf", o.k_gtvf, "GTVF sub-steps");
  cmd->add_option("--alpha", o.alpha, "Artificial viscosity coefficient");
  cmd->add_option("--pgrad", o.pgrad, "Pressure gradient form")->transform(CLI::CheckedTransformer(pgrad));
  cmd->add_option("--ustar-wall", o.ustar_wall, "Wall u* treatment")->transform(CLI::CheckedTransformer(ustar));
  cmd->add_option("--dt", o.dt, "Fixed timestep");
  cmd->add_flag("--adaptive", o.adaptive, "Adaptive timestep");
  cmd->add_option("--t-end", o.t_end, "End time");
  cmd->add_flag("--perturb,!--no-perturb", o.perturb, "Jitter the initial Taylor-Green lattice by up to dx/5 (default on)");
  cmd->add_option("--out", f.out_dir, "Output directory");
  cmd->add_option("--threads", f.threads, "Worker threads (default SISPH_THREADS or 1)");
  cmd->add_option("--seed", o.seed, "Random seed");
  cmd->add_flag("--quiet", f.quiet, "No progress output");
}

sisph::harness::RunOptions run_options(const CaseFlags& f) {
  sisph::harness::RunOptions ro;
  ro.threads = f.threads > 0 ? f.threads : sisph::threads_from_env(1);
  ro.seed = f.opts.seed;
  if (!f.out_dir.empty()) ro.out_dir = f.out_dir;
  if (!f.quiet) ro.log = &std::cerr;
  return ro;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Iterative incompressible SPH solver"};
  app.require_subcommand(1);

  CaseFlags run_flags, validate_flags;
  auto* run = app.add_subcommand("run", "Run a case");
  add_case_flags(run, run_flags);
  auto* list = app.add_subcommand("list-cases", "List case names");
  auto* validate = app.add_subcommand("validate", "Run a case and evaluate its checks");
  add_case_flags(validate, validate_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    if (list->parsed()) {
      for (const auto& n : sisph::harness::case_names()) std::cout << n << '\n';
      return 0;
    }
    CaseFlags& f = run->parsed() ? run_flags : validate_flags;
    if (!sisph::harness::is_case(f.name)) {
      std::cerr << "unknown case: " << f.name << "\nknown cases:";
      for (const auto& n : sisph::harness::case_names()) std::cerr << ' ' << n;
      std::cerr << '\n';
      return kUsageError;
    }
    if (run->parsed()) {
      const auto spec = sisph::harness::make_case(f.name, f.opts);
      const auto result = sisph::harness::run_case(spec, run_options(f));
      std::cout << "finished " << f.name << " at t=" << result.final_time << " in " << result.wall_seconds
                << " s (" << result.ppe_iterations.size() << " steps, mean PPE iterations "
                << sisph::harness::average_iterations(result.ppe_iterations, 0) << ")\n";
      return 0;
    }
    const auto checks = sisph::harness::validate_case(f.name, f.opts, run_options(f));
    bool ok = true;
    for (const auto& c : checks) {
      std::cout << (c.passed ? "PASS " : "FAIL ") << f.name << ": " << c.name << " (" << c.detail << ")\n";
      ok = ok && c.passed;
    }
    return ok ? 0 : kRuntimeError;
  } catch (const sisph::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
}
