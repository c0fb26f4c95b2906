#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "frontlab/error.hpp"

namespace {

void add_operator_flags(CLI::App* app, frontlab::tool::OperatorArgs& a) {
  app->add_option("--preset", a.preset, "burgers, kdvb, bo, hilbert or frac");
  app->add_option("--nu", a.nu, "dispersion coefficient for kdvb");
  app->add_option("--frac", a.frac, "fractional terms a:alpha,... for frac");
  app->add_option("--symbol", a.symbol, "operator symbol in the DSL, e.g. \"-0.1*(i*k)^3\"");
  app->add_option("--n", a.n, "grid points (power of two)");
  app->add_option("--length", a.length, "box length");
  app->add_option("--method", a.method, "auto, newton, shoot or closed_form");
}

}  // namespace

int main(int argc, char** argv) {
  namespace tool = frontlab::tool;
  CLI::App app{"frontlab: fronts of u_t - u_xx + u u_x = L u"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path, out_dir = ".";
  std::size_t threads = 1;
  long long seed = -1;
  app.add_option("--config", config_path, "run configuration file");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--threads", threads, "concurrent runs for sweep");
  app.add_option("--seed", seed, "perturbation seed");

  tool::OperatorArgs front_args;
  auto* front = app.add_subcommand("front", "solve for the front profile");
  add_operator_flags(front, front_args);

  tool::CertifyArgs cert_args;
  auto* cert = app.add_subcommand("certify", "count negative eigenvalues of H_eps");
  add_operator_flags(cert, cert_args.op);
  cert->add_option("--profile", cert_args.profile, "existing front.csv");
  cert->add_option("--eps", cert_args.eps, "comma separated eps samples");
  cert->add_option("--sweep-nu", cert_args.sweep_nu, "from:to:step sweep over kdvb nu");

  std::vector<std::string> overrides;
  auto* sim = app.add_subcommand("simulate", "evolve a perturbation and write a run directory");
  sim->add_option("--set", overrides, "section.key=value override (repeatable)");

  tool::OracleArgs oracle_args;
  auto* oracle = app.add_subcommand("oracle", "compare the solver with the Cole-Hopf solution");
  oracle->add_option("--n", oracle_args.n);
  oracle->add_option("--length", oracle_args.length);
  oracle->add_option("--dt", oracle_args.dt);
  oracle->add_option("--amplitude", oracle_args.amplitude, "Gaussian bump added to the front");
  oracle->add_option("--times", oracle_args.times, "comma separated times");
  oracle->add_option("--threshold", oracle_args.threshold, "largest accepted sup-norm discrepancy");
  oracle->add_option("--scheme", oracle_args.scheme);

  std::string run_dir;
  auto* rates = app.add_subcommand("rates", "decay-rate verdicts for a run directory");
  rates->add_option("run", run_dir, "run directory")->required();

  tool::SweepArgs sweep_args;
  auto* sweep = app.add_subcommand("sweep", "run a grid of simulations");
  sweep->add_option("--vary", sweep_args.vary, "section.key=v1,v2,... (repeatable)")->required();
  sweep->add_option("--set", overrides, "section.key=value override (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : tool::kUsage;
  }

  try {
    auto load_config = [&] {
      frontlab::config::RunConfig c;
      if (!config_path.empty()) c = frontlab::config::read_config(config_path);
      for (const auto& o : overrides) frontlab::config::apply_override(c, o);
      if (app.get_option("--out")->count() > 0) c.out_dir = out_dir;
      if (seed >= 0) c.seed = static_cast<std::uint64_t>(seed);
      return c;
    };
    if (*front) return tool::cmd_front(front_args, out_dir, std::cout);
    if (*cert) return tool::cmd_certify(cert_args, out_dir, std::cout);
    if (*sim) return tool::run_simulation(load_config(), std::cout);
    if (*oracle) return tool::cmd_oracle(oracle_args, out_dir, std::cout);
    if (*rates) return tool::cmd_rates(run_dir, app.get_option("--out")->count() > 0 ? out_dir : run_dir, std::cout);
    if (*sweep) {
      sweep_args.threads = threads;
      return tool::cmd_sweep(load_config(), sweep_args, std::cout);
    }
  } catch (const frontlab::InstabilityError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return tool::kUnstable;
  } catch (const frontlab::ConvergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return tool::kUnstable;
  } catch (const frontlab::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return tool::kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return tool::kUsage;
  }
  return tool::kUsage;
}
