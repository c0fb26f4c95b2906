#ifndef FRONTLAB_CERTIFY_HPP_
#define FRONTLAB_CERTIFY_HPP_

// Negative-eigenvalue counts for H_eps = -(1-eps) d_xx + phi'/2.
//
// H_eps is discretized by second-order finite differences on [-Ls, Ls] with
// Dirichlet ends; the count is the inertia of the resulting symmetric
// tridiagonal matrix (pivot signs of T - shift I = L D L^T).

#include <cstddef>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "frontlab/front.hpp"

namespace frontlab::certify {

struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> off;  // size diag.size() - 1

  std::size_t size() const { return diag.size(); }
};

struct InertiaCount {
  int below = 0;           // eigenvalues < shift
  bool perturbed = false;  // a zero pivot forced a shift perturbation
};

// Sylvester inertia: number of eigenvalues strictly below `shift`. A zero
// pivot is avoided by moving the shift by 1e-13 (scaled by the matrix size);
// a second breakdown throws ConvergenceError.
InertiaCount count_below(const Tridiagonal& t, double shift);
int count_negative_eigenvalues(const Tridiagonal& t);

struct SchrodingerDiscretization {
  Tridiagonal matrix;
  double half_width = 0.0;  // Ls
  double spacing = 0.0;     // h_fd = 2 Ls / (M + 1)
  double eps = 0.0;
  std::size_t m = 0;        // interior points
};

// -(1-eps) d_xx + potential(x) on M interior points of [-Ls, Ls].
SchrodingerDiscretization discretize(const std::function<double(double)>& potential, double eps,
                                     std::size_t m, double half_width);

struct FdParams {
  double half_width = 0.0;      // 0: 0.45 L of the front's box
  double target_spacing = 0.05; // picks M when m == 0
  std::size_t m = 0;
  bool richardson = true;       // repeat with 2M, counts must agree
};

inline const std::vector<double>& default_eps_samples() {
  static const std::vector<double> v{0.01, 0.05, 0.1, 0.2, 0.4, 0.8};
  return v;
}

struct CountRow {
  double eps = 0.0;
  int count = 0;
  int count_refined = -1;   // at 2M, -1 when not computed
  bool resolved = true;     // count == count_refined
  bool near_zero = false;   // an eigenvalue within 1e-10 of 0 (counted as nonnegative)
};

struct SpectralCertificate {
  std::string operator_label;
  std::string operator_text;
  std::vector<CountRow> rows;  // first row is eps = 0 (reference)
  bool satisfied = false;      // some eps in (0,1) with count exactly 1
  bool resolved = true;        // every row resolved
  std::size_t m = 0;
  double half_width = 0.0;
  double spacing = 0.0;
  bool richardson = false;

  int count_at_zero() const { return rows.empty() ? -1 : rows.front().count; }
  // Smallest count over eps in (0,1) and the first eps attaining it.
  int min_count() const;
  double argmin_eps() const;
};

SpectralCertificate certify_front(const front::FrontProfile& profile,
                                  const std::vector<double>& eps_samples = default_eps_samples(),
                                  const FdParams& params = {});

std::string certificate_json(const SpectralCertificate& c);
void write_certificate(const std::filesystem::path& path, const SpectralCertificate& c);

struct SweepOptions {
  double base_length = 80.0;  // box length for |nu| <= 1/4; grows with |nu|
  double max_spacing = 0.08;  // grid spacing bound used to pick N
  std::vector<double> eps_samples = default_eps_samples();
  FdParams fd;
  // Called after each row (for progress output); may be empty.
  std::function<void(double, bool)> on_row;
};

struct SweepRow {
  double nu = 0.0;
  bool solved = false;
  bool satisfied = false;
  bool resolved = false;
  int min_count = -1;
  double argmin_eps = 0.0;
  std::string error;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  // Largest |nu| with satisfied = true (NaN when none).
  double threshold = 0.0;
};

// Box used for a KdV-Burgers front at nu: long enough for the slow
// oscillatory tail (decay rate 1/(2|nu|) for |nu| > 1/4) to reach 1e-10.
spectral::Grid sweep_grid(double nu, const SweepOptions& options);

SweepResult sweep_nu(double from, double to, double step, const SweepOptions& options = {});
void write_sweep_csv(const std::filesystem::path& path, const SweepResult& result);

}  // namespace frontlab::certify

#endif  // FRONTLAB_CERTIFY_HPP_
