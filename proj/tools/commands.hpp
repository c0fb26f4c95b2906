#ifndef FRONTLAB_TOOLS_COMMANDS_HPP_
#define FRONTLAB_TOOLS_COMMANDS_HPP_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "frontlab/run_config.hpp"

namespace frontlab::tool {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kUncertified = 2;
inline constexpr int kUnstable = 3;

struct OperatorArgs {
  std::string preset = "burgers";
  double nu = 0.0;
  std::string frac;
  std::string symbol;
  std::size_t n = 1024;
  double length = 80.0;
  std::string method = "auto";
};

config::RunConfig operator_config(const OperatorArgs& a);
front::FrontProfile solve_configured_front(const config::RunConfig& c);

int cmd_front(const OperatorArgs& a, const std::filesystem::path& out, std::ostream& os);

struct CertifyArgs {
  OperatorArgs op;
  std::string profile;
  std::string eps;
  std::string sweep_nu;  // from:to:step
};
int cmd_certify(const CertifyArgs& a, const std::filesystem::path& out, std::ostream& os);

// Runs one configured simulation into c.out_dir.
int run_simulation(const config::RunConfig& c, std::ostream& os);

struct OracleArgs {
  std::size_t n = 1024;
  double length = 80.0;
  double dt = 1e-3;
  double amplitude = 0.3;
  std::string times = "1";
  double threshold = 1e-6;
  std::string scheme = "etdrk4";
};
int cmd_oracle(const OracleArgs& a, const std::filesystem::path& out, std::ostream& os);

int cmd_rates(const std::filesystem::path& run_dir, const std::filesystem::path& out, std::ostream& os);

struct SweepArgs {
  std::vector<std::string> vary;  // section.key=v1,v2,...
  std::size_t threads = 1;
};
int cmd_sweep(const config::RunConfig& base, const SweepArgs& a, std::ostream& os);

}  // namespace frontlab::tool

#endif  // FRONTLAB_TOOLS_COMMANDS_HPP_
