#ifndef FRONTLAB_RUN_CONFIG_HPP_
#define FRONTLAB_RUN_CONFIG_HPP_

// Run configuration: flat `key = value` text with [section] headers.
// Doubles are written in shortest round-trip form, so write/read is
// bit-identical.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "frontlab/certify.hpp"
#include "frontlab/diagnostics.hpp"
#include "frontlab/evolution.hpp"
#include "frontlab/symbol.hpp"

namespace frontlab::config {

struct RunConfig {
  // [operator]: either a preset (burgers, kdvb, bo, hilbert, frac) or a DSL
  // string in `symbol`, which wins when non-empty.
  std::string preset = "burgers";
  double nu = 0.0;
  std::vector<symbol::FracTerm> frac;
  std::string symbol;

  // [grid]
  std::size_t n = 1024;
  double length = 80.0;

  // [front]
  std::string front_method = "auto";  // auto, newton, shoot, closed_form
  double front_tol = 1e-10;
  int front_max_iter = 40;

  // [certificate]
  std::vector<double> eps = certify::default_eps_samples();

  // [perturbation]
  std::string kind = "gaussian";
  double amplitude = 0.5;  // 0: zero perturbation
  double width = 1.0;
  std::uint64_t seed = 0;

  // [stepper]
  std::string scheme = "etdrk4";
  double dt = 0.01;
  double gamma = 1.1;
  double t_end = 50.0;
  std::size_t stride = 10;
  bool dealias = true;

  // [diagnostics]
  std::vector<double> p_list{1.5, 4.0};
  double fit_t_min = 0.0;  // 0 with fit_t_max = 0: [T_end/4, T_end]
  double fit_t_max = 0.0;
  double delta = 0.05;
  std::vector<double> eps_freq{0.05, 0.1, 0.2};
  std::string model = "auto";  // auto, kdv_burgers, fractional_odd

  // [output]
  std::string out_dir = "run";
  std::size_t field_every = 10;  // write a field snapshot every this many records

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

std::string to_text(const RunConfig& c);
// Keys present in `text` override `base`; unknown keys are rejected.
RunConfig from_text(const std::string& text, RunConfig base = {});
// "section.key=value" applied on top of c.
void apply_override(RunConfig& c, const std::string& assignment);
void write_config(const std::filesystem::path& path, const RunConfig& c);
RunConfig read_config(const std::filesystem::path& path);

// Throws InvalidArgument when a field is outside its module's preconditions.
void validate(const RunConfig& c);

symbol::MultiplierSpec make_operator(const RunConfig& c);
evolution::StepperConfig make_stepper(const RunConfig& c);
diagnostics::Model resolve_model(const RunConfig& c);

// "1:0.5,0.5:0.75" <-> [(1, 0.5), (0.5, 0.75)].
std::vector<symbol::FracTerm> parse_frac_list(const std::string& text);
std::string format_frac_list(const std::vector<symbol::FracTerm>& terms);
std::vector<double> parse_number_list(const std::string& text);
std::string format_number_list(const std::vector<double>& values);

}  // namespace frontlab::config

#endif  // FRONTLAB_RUN_CONFIG_HPP_
