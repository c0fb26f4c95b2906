#ifndef FRONTLAB_DIAGNOSTICS_HPP_
#define FRONTLAB_DIAGNOSTICS_HPP_

// Post-processing of norm series: energy inequality, frequency splitting,
// decay-rate fits and envelope verdicts against the predicted rates.

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "frontlab/evolution.hpp"

namespace frontlab::diagnostics {

using evolution::NormSeries;

struct EnergyCheck {
  // min over steps of -(|v|^2_{n+1} - |v|^2_n) / (dt * avg |v_x|^2), trapezoid in time.
  double c_fit = 0.0;
  std::size_t violations = 0;  // steps where |v|^2 grows by more than 1e-10 |v|^2
  std::size_t usable = 0;      // steps with |v_x|_2 > 1e-12 at both ends
};

// Throws InvalidArgument when fewer than 10 usable steps exist.
EnergyCheck check_energy_inequality(const NormSeries& series);

struct MonotonicityReport {
  std::size_t violations = 0;
  double worst_ratio = 0.0;
};
// |v|_2 non-increasing within 1e-10 relative between recorded samples.
MonotonicityReport monotonicity_audit(const NormSeries& series);

// max_t |v(t)|_1 / |v(0)|_1 (1 for v0 = 0).
double l1_growth(const NormSeries& series);

struct FrequencySplit {
  double eps_freq = 0.0;
  double band_measure = 0.0;  // |A|: retained modes / L
  std::vector<double> times;
  std::vector<double> low;    // I_<eps
  std::vector<double> high;   // I_>eps
  std::vector<double> total;  // |v|_2^2
  std::vector<double> l1;
  double max_parseval_error = 0.0;     // max |low + high - total| / total
  std::size_t bernstein_violations = 0;  // low > |A| |v(t)|_1^2 (1 + 1e-12)
};

FrequencySplit frequency_split_series(std::span<const evolution::PerturbationState> snapshots, double eps_freq);

// Steps where high(t) > I(0) exp(-c_fit eps^2 t) + max_{s<=t} low(s) (1e-12 slack).
std::size_t split_inequality_violations(const FrequencySplit& split, double c_fit);

// Root of exp(-c1 eps^2 t) = eps in (0, 1).
double optimal_eps(double t, double c1);

struct RateFit {
  double t_min = 0.0;
  double t_max = 0.0;
  double exponent = 0.0;       // slope of ln y - beta ln ln t against ln t
  double log_correction = 0.0; // beta
  double log_amplitude = 0.0;  // intercept
  double r2 = 0.0;
  std::size_t samples = 0;
};

// Least squares over samples with t_min <= t <= t_max. Needs >= 8 samples,
// positive values, and t_min >= 2 when beta != 0.
RateFit fit_rate(std::span<const double> t, std::span<const double> y, double t_min, double t_max,
                 double beta = 0.0);

enum class Model { kKdvBurgers, kFractionalOdd };
std::string model_name(Model m);

struct Prediction {
  std::string column;  // series column ("l2", "lp:4", "linf", "dv_l2")
  double p = 0.0;      // the L^p index (2 for dv_l2)
  double rate = 0.0;   // bound decays like t^-rate (ln t)^beta
  double beta = 0.0;
};

// Predicted rates for the columns present in series.p_list (plus l2, linf,
// and dv_l2 for the fractional model). L^1 has no decay prediction.
std::vector<Prediction> predicted_rates(Model model, std::span<const double> p_list, double delta = 0.05);

struct Verdict {
  Prediction prediction;
  RateFit fit;               // reported as data
  double envelope_start = 0.0;  // norm t^rate (ln t)^-beta at the window start
  double envelope_sup = 0.0;
  bool satisfied = false;    // envelope_sup <= 2 envelope_start
};

struct VerdictTable {
  Model model = Model::kKdvBurgers;
  double t_min = 0.0;
  double t_max = 0.0;
  double delta = 0.05;
  std::vector<Verdict> rows;

  bool all_satisfied() const;
};

// Window defaults to [T_end/4, T_end] when t_min >= t_max.
VerdictTable compare_to_theorem(const NormSeries& series, Model model, double t_min = 0.0, double t_max = 0.0,
                                double delta = 0.05);

struct WeightedReport {
  double sup_weighted = 0.0;      // sup_t integral v^2 |x|
  double cumulative_l2sq = 0.0;   // integral_0^T |v|_2^2 dt
  bool growth_flag = false;       // weighted norm above 3x its initial value
  std::size_t chain_violations = 0;  // t |v(t)|^2 > integral_0^t |v|^2 (1e-12 slack)
};
WeightedReport weighted_bound_monitor(const NormSeries& series);

struct CumulativeReport {
  double x0_dot_sq = 0.0;  // integral |x0'|^2 dt
  double dv_sq = 0.0;      // integral |v_x|_2^2 dt
  double initial_l2sq = 0.0;
  bool within(double factor) const {
    return x0_dot_sq <= factor * initial_l2sq && dv_sq <= factor * initial_l2sq;
  }
};
CumulativeReport cumulative_bounds(const NormSeries& series);

// series.csv: t, x0, x0_dot, l1, l2, lp:<p>..., linf, dv_l2, weighted, m_t.
void write_series_csv(const std::filesystem::path& path, const NormSeries& series);
NormSeries read_series_csv(const std::filesystem::path& path);

void write_verdicts_csv(const std::filesystem::path& path, const VerdictTable& table);
std::string verdict_report(const VerdictTable& table);

// Log-log plot of the columns of each verdict with the predicted slopes as
// dashed guides.
void write_loglog_svg(const std::filesystem::path& path, const NormSeries& series, const VerdictTable& table);

}  // namespace frontlab::diagnostics

#endif  // FRONTLAB_DIAGNOSTICS_HPP_
