#ifndef FRONTLAB_EVOLUTION_HPP_
#define FRONTLAB_EVOLUTION_HPP_

// Perturbations of a front in its co-moving frame:
//
//   u(t, x) = phi(x - x0(t)) + v(t, x - x0(t)),
//   v_t = v_xx + L v + x0' (v_x + phi') - phi' v - phi v_x - v v_x,
//   x0' = -gamma <phi', v>.
//
// The minus sign on x0' is what makes d/dt |v|^2 = -2 <H_gamma v, v> + 2 Re <L v, v>
// with H_gamma = -d_xx + phi'/2 + gamma <phi', .> phi'; with the opposite sign
// the rank-one term would feed energy in instead of removing it.
//
// phi' v + phi v_x and v v_x are evaluated in skew-symmetric form, so on the
// grid their contribution to d/dt |v|^2 is exactly -<phi' v, v>/2 and 0.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "frontlab/front.hpp"
#include "frontlab/spectral.hpp"
#include "frontlab/symbol.hpp"

namespace frontlab::evolution {

struct PerturbationState {
  spectral::Field v{spectral::Grid(2, 1.0)};
  double x0 = 0.0;
  double t = 0.0;
  double x0_dot_last = 0.0;

  // max |v| over the outer 5% of the box divided by max |v| (0 for v = 0).
  double boundary_ratio() const;
  bool boundary_ok() const { return boundary_ratio() <= 1e-6; }
};

enum class Scheme { kEtdrk4, kImex2 };
std::string_view scheme_name(Scheme s);
Scheme parse_scheme(std::string_view name);

// Switches for the terms of the right-hand side; the defaults give the full
// perturbation equation. Turning pieces off is for calibration runs.
struct Terms {
  bool nonlinear = true;
  bool front = true;       // phi' v + phi v_x and the x0' terms
  bool modulation = true;  // x0' = -gamma <phi', v>; off means x0' = 0
};

struct StepperConfig {
  double dt = 1e-2;
  Scheme scheme = Scheme::kEtdrk4;
  double gamma = 1.1;
  bool dealias = true;
  double t_end = 1.0;
  std::size_t stride = 10;  // steps between recorded samples
  Terms terms;
};

// Checks dt > 0, t_end >= 0, stride >= 1, gamma > 2/(phi_minus - phi_plus).
void validate(const StepperConfig& config, const front::FrontProfile& front);

struct Tendency {
  spectral::Field dv;
  double x0_dot = 0.0;
};

Tendency rhs_perturbation(const PerturbationState& state, const front::FrontProfile& front,
                          const symbol::MultiplierSpec& spec, double gamma, const Terms& terms = {},
                          bool dealias = true);

// Precomputed linear propagators for a fixed (front, spec, dt, scheme).
class Stepper {
 public:
  Stepper(const front::FrontProfile& front, const symbol::MultiplierSpec& spec, const StepperConfig& config);

  PerturbationState step(const PerturbationState& state) const;
  const StepperConfig& config() const { return config_; }
  const front::FrontProfile& front() const { return *front_; }

 private:
  struct Explicit {
    spectral::Spectrum nv;  // explicit part, half spectrum
    double x0_dot;
  };
  Explicit explicit_part(const spectral::Spectrum& v_hat) const;
  PerturbationState step_etdrk4(const PerturbationState& s) const;
  PerturbationState step_imex2(const PerturbationState& s) const;

  const front::FrontProfile* front_;
  StepperConfig config_;
  spectral::Grid grid_;
  spectral::Field phi_box_;
  spectral::Field phi_prime_;
  std::vector<double> k_;
  std::vector<spectral::Complex> lin_;  // -k^2 + l(k) on the half spectrum
  // etdrk4
  std::vector<spectral::Complex> e_, e2_, q_, f1_, f2_, f3_;
  // imex2 (ARS(2,2,2))
  std::vector<spectral::Complex> implicit_inv_;
};

// One step; builds a Stepper each call (use Stepper directly in loops).
// Throws InstabilityError on non-finite values or when
// dt |v|_inf k_max > 1.
PerturbationState step(const PerturbationState& state, const front::FrontProfile& front,
                       const symbol::MultiplierSpec& spec, const StepperConfig& config);

struct NormRecord {
  double t = 0.0;
  double l1 = 0.0;
  double l2 = 0.0;
  double linf = 0.0;
  std::vector<double> lp;  // one per configured p
  double dv_l2 = 0.0;      // |v_x|_2
  double weighted = 0.0;   // integral of v^2 |x|
  double x0 = 0.0;
  double x0_dot = 0.0;
  double m_t = 0.0;        // sup over s <= t of |v(s)|_inf
};

struct NormSeries {
  std::vector<double> p_list;
  std::vector<NormRecord> records;

  std::size_t size() const { return records.size(); }
  std::vector<double> times() const;
  // Column by name: l1, l2, linf, dv_l2, weighted, x0, x0_dot, m_t, or
  // "lp:<p>" for an entry of p_list.
  std::vector<double> column(std::string_view name) const;
};

NormRecord measure(const PerturbationState& s, std::span<const double> p_list, double previous_m_t = 0.0);

struct MonotonicityAudit {
  std::size_t violations = 0;  // steps with |v|_2 growing by more than 1e-10 relative
  double worst_ratio = 0.0;    // max over steps of |v_{n+1}|_2 / |v_n|_2 - 1
};

struct Trajectory {
  NormSeries series;
  std::vector<PerturbationState> snapshots;  // every stride-th step when kept
  MonotonicityAudit audit;                   // checked at every step, not only recorded ones
  std::size_t steps = 0;
  bool aborted = false;
  std::string abort_reason;
  std::vector<std::string> warnings;
  PerturbationState final_state;
};

struct EvolveOptions {
  std::vector<double> p_list{1.5, 4.0};
  bool keep_snapshots = false;
  // Called with each recorded state (after the series record is appended).
  std::function<void(const PerturbationState&)> on_snapshot;
};

// Runs from t = 0 to t_end. An instability ends the run with aborted = true
// and the last good state kept as final_state.
Trajectory evolve(const spectral::Field& v0, const front::FrontProfile& front, const symbol::MultiplierSpec& spec,
                  const StepperConfig& config, const EvolveOptions& options = {});

// Full field u(t, x) = phi(x - x0) + v(x - x0) on the box (analytic tanh part,
// spectral shift of the decaying parts).
spectral::Field reconstruct_solution(const PerturbationState& s, const front::FrontProfile& front);

enum class PerturbationKind { kGaussian, kOddGaussianDerivative, kOddSinePacket, kRandomBandlimited };
PerturbationKind parse_perturbation_kind(std::string_view name);
std::string_view perturbation_kind_name(PerturbationKind k);

// gaussian: a exp(-(x/w)^2); odd_gaussian_derivative: -a (x/w) exp(-(x/w)^2);
// odd_sine_packet: a sin(2x/w) exp(-(x/w)^2); random_bandlimited: random
// modes with |k| <= 2/w, normalized to |v|_inf = a, under a Gaussian envelope
// of width 8w. Odd kinds are antisymmetrized on the grid.
spectral::Field make_perturbation(const spectral::Grid& g, PerturbationKind kind, double amplitude, double width,
                                  std::uint64_t seed = 0);

// Exact solution of u_t - u_xx + u u_x = 0 by the Cole-Hopf transform. u0 is
// taken to approach its edge values of the box outside it.
std::vector<double> cole_hopf_exact(const spectral::Field& u0, double t, std::span<const double> xs);
spectral::Field cole_hopf_exact(const spectral::Field& u0, double t);

}  // namespace frontlab::evolution

#endif  // FRONTLAB_EVOLUTION_HPP_
