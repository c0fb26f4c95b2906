#ifndef FRONTLAB_TESTS_SUPPORT_HPP_
#define FRONTLAB_TESTS_SUPPORT_HPP_

// Shared helpers for the unit tests and the acceptance driver: random test
// fields and the randomized inequality suites.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "frontlab/spectral.hpp"
#include "frontlab/symbol.hpp"

namespace frontlab::checks {

using spectral::Field;
using spectral::Grid;

// Smooth localized field: a few random cosines (|k| <= kmax) under a Gaussian
// envelope of random width and center.
inline Field random_packet(const Grid& g, std::mt19937_64& rng, double kmax = 4.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int modes = 1 + static_cast<int>(u(rng) * 5);
  std::vector<double> amp(modes), k(modes), ph(modes);
  for (int i = 0; i < modes; ++i) {
    amp[i] = 2.0 * u(rng) - 1.0;
    k[i] = kmax * u(rng);
    ph[i] = 2.0 * std::numbers::pi * u(rng);
  }
  const double width = 1.0 + 4.0 * u(rng);
  const double center = (u(rng) - 0.5) * 0.2 * g.length();
  return Field::sample(g, [&](double x) {
    double s = 0.0;
    for (int i = 0; i < modes; ++i) s += amp[i] * std::cos(k[i] * x + ph[i]);
    const double y = (x - center) / width;
    return (s + 0.3) * std::exp(-y * y);
  });
}

struct SuiteResult {
  std::string name;
  int trials = 0;
  int failures = 0;
  double worst = 0.0;  // worst margin, in the suite's own units
};

// |f|_2^2 against the mode sum (1/L) sum |f_hat|^2 on the full spectrum.
inline SuiteResult parseval_suite(int trials, std::uint64_t seed) {
  SuiteResult r{"parseval", trials};
  std::mt19937_64 rng(seed);
  const Grid g(1024, 80.0);
  for (int t = 0; t < trials; ++t) {
    const Field f = random_packet(g, rng, 8.0);
    const auto s = spectral::forward(f);
    double modes = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j) {
      const double w = (j == 0 || j == s.size() - 1) ? 1.0 : 2.0;
      modes += w * std::norm(s[j]);
    }
    modes *= g.spacing() / static_cast<double>(g.size());  // forward() is unnormalized
    const double direct = std::pow(spectral::lp_norm(f, 2.0), 2);
    const double rel = std::abs(modes - direct) / direct;
    r.worst = std::max(r.worst, rel);
    if (rel > 1e-12) ++r.failures;
  }
  return r;
}

// |f_A|_q <= |A|^(1/p - 1/q) |f|_p for (p, q) in {(1,2), (2,inf), (1,inf)}.
inline SuiteResult bernstein_suite(int trials, std::uint64_t seed) {
  SuiteResult r{"bernstein", trials};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Grid g(1024, 80.0);
  const double inf = std::numeric_limits<double>::infinity();
  const double pairs[3][2] = {{1.0, 2.0}, {2.0, inf}, {1.0, inf}};
  for (int t = 0; t < trials; ++t) {
    const Field f = random_packet(g, rng, 6.0);
    const double eps = 0.02 + 0.5 * u(rng);
    const auto [low, high] = spectral::band_project(f, eps);
    const double measure = spectral::band_measure(g, eps);
    bool ok = true;
    for (const auto& pq : pairs) {
      const double p = pq[0], q = pq[1];
      const double expo = 1.0 / p - (std::isinf(q) ? 0.0 : 1.0 / q);
      const double lhs = spectral::lp_norm(low, q);
      const double rhs = std::pow(measure, expo) * spectral::lp_norm(f, p);
      r.worst = std::max(r.worst, lhs / rhs);
      if (lhs > rhs * (1.0 + 1e-12)) ok = false;
    }
    if (!ok) ++r.failures;
  }
  return r;
}

// |f|_r <= |f|_p^theta |f|_q^(1-theta), 1/r = theta/p + (1-theta)/q.
inline SuiteResult log_convexity_suite(int trials, std::uint64_t seed) {
  SuiteResult r{"log-convexity", trials};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Grid g(1024, 80.0);
  for (int t = 0; t < trials; ++t) {
    const Field f = random_packet(g, rng);
    const double p = 1.0 + 2.0 * u(rng);
    const double q = p + 0.5 + 6.0 * u(rng);
    const double theta = u(rng);
    const double rr = 1.0 / (theta / p + (1.0 - theta) / q);
    const double lhs = spectral::lp_norm(f, rr);
    const double rhs = std::pow(spectral::lp_norm(f, p), theta) * std::pow(spectral::lp_norm(f, q), 1.0 - theta);
    r.worst = std::max(r.worst, lhs / rhs);
    if (lhs > rhs * (1.0 + 1e-12)) ++r.failures;
  }
  return r;
}

// |f|_inf^2 <= C |f_x|_2 |f|_2 with C = 1.05.
inline SuiteResult agmon_suite(int trials, std::uint64_t seed) {
  SuiteResult r{"agmon", trials};
  std::mt19937_64 rng(seed);
  const Grid g(1024, 80.0);
  for (int t = 0; t < trials; ++t) {
    const Field f = random_packet(g, rng);
    const double lhs = std::pow(spectral::lp_norm(f, std::numeric_limits<double>::infinity()), 2);
    const double rhs = spectral::lp_norm(spectral::derivative(f, 1), 2.0) * spectral::lp_norm(f, 2.0);
    r.worst = std::max(r.worst, lhs / rhs);
    if (lhs > 1.05 * rhs) ++r.failures;
  }
  return r;
}

// integral ((-d_xx)^alpha f) f |f|^(p-2) >= 0 for p in {2,3,4}, alpha in
// {0.3, 0.5, 1}. Failure below -1e-10 (fields are O(1)).
inline SuiteResult diffusive_positivity_suite(int trials, std::uint64_t seed) {
  SuiteResult r{"diffusive positivity", trials};
  std::mt19937_64 rng(seed);
  const Grid g(1024, 80.0);
  const double alphas[3] = {0.3, 0.5, 1.0};
  const double ps[3] = {2.0, 3.0, 4.0};
  r.worst = std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    const Field f = random_packet(g, rng);
    bool ok = true;
    for (double alpha : alphas) {
      const auto expr = symbol::pow(symbol::abs(symbol::SymbolExpr::wavenumber()), 2.0 * alpha);
      const Field af = spectral::apply_multiplier(f, expr);
      for (double p : ps) {
        double s = 0.0;
        for (std::size_t j = 0; j < g.size(); ++j) s += af[j] * f[j] * std::pow(std::abs(f[j]), p - 2.0);
        s *= g.spacing();
        r.worst = std::min(r.worst, s);
        if (s < -1e-10) ok = false;
      }
    }
    if (!ok) ++r.failures;
  }
  return r;
}

// Kernel of exp(-t |k|^(2 alpha)): nonnegative for alpha in [0.3, 1]. The
// grid is fine enough that the symbol is below 1e-13 at the Nyquist
// wavenumber for every sampled (alpha, t).
inline SuiteResult kernel_positivity_suite(int trials, std::uint64_t seed) {
  SuiteResult r{"kernel positivity", trials};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Grid g(4096, 40.0);
  for (int t = 0; t < trials; ++t) {
    const double alpha = 0.3 + 0.7 * u(rng);
    const double time = 1.0 + 2.0 * u(rng);
    const auto rep = spectral::kernel_positivity_check(g, alpha, time);
    r.worst = std::min(r.worst, rep.min_value / rep.max_value);
    if (!rep.positive) ++r.failures;
  }
  return r;
}

// alpha = 1.5: the kernel must change sign.
inline SuiteResult kernel_sign_change_suite(int trials, std::uint64_t seed) {
  SuiteResult r{"kernel sign change (alpha 1.5)", trials};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Grid g(2048, 80.0);
  for (int t = 0; t < trials; ++t) {
    const double time = 0.5 + 2.5 * u(rng);
    const auto rep = spectral::kernel_positivity_check(g, 1.5, time);
    r.worst = std::min(r.worst, rep.min_value / rep.max_value);
    if (rep.positive) ++r.failures;
  }
  return r;
}

inline std::vector<SuiteResult> all_property_suites(int trials = 100, std::uint64_t seed = 20261018) {
  return {parseval_suite(trials, seed),           bernstein_suite(trials, seed + 1),
          log_convexity_suite(trials, seed + 2),  agmon_suite(trials, seed + 3),
          diffusive_positivity_suite(trials, seed + 4), kernel_positivity_suite(trials, seed + 5),
          kernel_sign_change_suite(trials, seed + 6)};
}

}  // namespace frontlab::checks

#endif  // FRONTLAB_TESTS_SUPPORT_HPP_
