#ifndef FRONTLAB_FRONT_HPP_
#define FRONTLAB_FRONT_HPP_

// Stationary fronts of  -phi'' + phi phi' = L phi,  phi(-inf) = 1, phi(+inf) = -1.
//
// On the periodic box a front is stored as phi = -tanh(x/2) + w with a
// decaying periodic correction w, so every spectral operation acts on
// periodic data. L applied to the tanh part goes through l(k)/(ik) applied to
// its (decaying) derivative.
//
// The wrap point x = -L/2 sits in the middle of the periodic jump from -1 back
// to 1, so wherever phi enters an operator as a coefficient its value there is
// taken as w(-L/2) (box_background + w, see box_coefficient). This keeps the
// discrete operators parity-exact. Stored samples phi[j] are -tanh(x_j/2) + w_j
// for every j.

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "frontlab/spectral.hpp"
#include "frontlab/symbol.hpp"

namespace frontlab::front {

struct HypothesisReport {
  double phi_prime_l2 = 0.0;
  double phi_second_l2 = 0.0;
  double first_moment = 0.0;    // integral of (1+|x|)|phi'|
  double tail_fraction = 0.0;   // share of first_moment from |x| > 0.4 L
  double edge_phi_prime = 0.0;  // max |phi'| over the outer 5% of the box
  bool edge_decayed = false;    // edge_phi_prime <= 1e-10
  double endpoint_error = 0.0;  // max(|phi_1 - 1|, |phi_{N-1} + 1|)
};

struct FrontProfile {
  spectral::Field phi;
  spectral::Field phi_prime;
  spectral::Field correction;  // w = phi + tanh(x/2)
  double phi_minus = 1.0;
  double phi_plus = -1.0;
  symbol::MultiplierSpec op;
  double residual_sup = 0.0;
  // Constant source s with -phi'' + phi phi' - L phi + s = 0 on the box; zero
  // unless the solve was allowed to absorb one (see NewtonOptions).
  double box_forcing = 0.0;
  HypothesisReport hypotheses;
  std::string method;
  int iterations = 0;
  std::vector<std::string> warnings;

  const spectral::Grid& grid() const { return phi.grid; }
  // phi with the wrap-point value replaced by w(-L/2).
  spectral::Field box_coefficient() const;
  // max phi' (<= 1e-10 means monotone decreasing).
  double max_slope() const;
  bool monotone() const { return max_slope() <= 1e-10; }
};

struct GalileanParams {
  double u_minus = 1.0;
  double u_plus = -1.0;
  double c = 0.0;
  double lambda = 1.0;

  double reconstructed_minus() const { return lambda + c * lambda; }
  double reconstructed_plus() const { return -lambda + c * lambda; }
};

// The tanh background and its first three derivatives.
double tanh_background(double x);
double tanh_background_derivative(double x, int order);
// -tanh(x/2) on the grid with the value 0 at the wrap point.
spectral::Field box_background(const spectral::Grid& g);

// Builds a FrontProfile from the correction w: phi, phi', the residual and the
// hypothesis report.
FrontProfile assemble_profile(spectral::Field correction, const symbol::MultiplierSpec& op,
                              std::string method);

// phi = -tanh(x/2).
FrontProfile closed_form_burgers(const spectral::Grid& g);

// L = nu d_xxx through the first integral  nu phi'' + phi' + (1 - phi^2)/2 = 0,
// integrated along the unstable manifold of phi = 1. nu < 0 is handled by the
// reflection phi(x) -> -phi(-x), which maps nu to -nu.
FrontProfile shoot_local_front(double nu, const spectral::Grid& g, double tol = 1e-10);

struct NewtonOptions {
  double tol = 1e-10;
  int max_iter = 40;
  int gmres_restart = 80;
  int gmres_max_iter = 2000;
  double gmres_rel_tol = 1e-11;
  enum class Pin { kOrthogonal, kCenterValue };
  // kOrthogonal: <phi', delta> = 0 followed by re-phasing; kCenterValue:
  // phi(0) = 0 imposed in every linear solve.
  Pin pin = Pin::kOrthogonal;
  bool rephase = true;  // translate so that phi(0) = 0 (kOrthogonal only)
  // Nonlocal operators whose L phi decays slowly leave a constant residual on
  // the periodic box (the border column absorbs it). When allowed, only the
  // non-constant part must meet tol and the constant is reported as
  // box_forcing.
  bool allow_box_forcing = false;
};

FrontProfile newton_front(const symbol::MultiplierSpec& spec, const spectral::Grid& g,
                          const FrontProfile& initial_guess, const NewtonOptions& options = {});

// sup | -phi'' + phi phi' - L phi | using candidate.op.
double profile_residual(const FrontProfile& candidate);
spectral::Field profile_residual_field(const spectral::Field& correction,
                                       const symbol::MultiplierSpec& op);

// Solves according to the operator: closed form for L = 0, shooting for
// nu (ik)^3, otherwise Newton with phi(0) = 0 pinned and box forcing allowed
// (falling back to a homotopy in the operator strength).
FrontProfile solve_front(const symbol::MultiplierSpec& spec, const spectral::Grid& g,
                         const NewtonOptions& options = {});

// Translate so that phi(0) = 0; returns the shift applied.
double rephase(FrontProfile& profile);

std::pair<GalileanParams, symbol::MultiplierSpec> galilean_normalize(
    double u_minus, double u_plus, const symbol::MultiplierSpec& spec);

// u(t, x) = lambda U(lambda^2 t, lambda x - c lambda^2 t) + c lambda on the
// target grid. `normalized` is U at the normalized time lambda^2 t, a field
// with endpoints (1, -1).
spectral::Field denormalize_solution(const spectral::Field& normalized, const GalileanParams& params,
                                     const spectral::Grid& target, double t = 0.0);

// CSV (x, phi, phi_prime) plus a JSON sidecar next to it (same stem, .json).
void write_profile(const std::filesystem::path& csv_path, const FrontProfile& profile);
FrontProfile read_profile(const std::filesystem::path& csv_path);

// If L = nu (ik)^3 (up to a real factor) returns true and sets nu.
bool match_kdvb(const symbol::SymbolExpr& expr, double& nu);

}  // namespace frontlab::front

#endif  // FRONTLAB_FRONT_HPP_
