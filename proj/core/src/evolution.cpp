#include "frontlab/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "frontlab/certify.hpp"
#include "frontlab/error.hpp"

namespace frontlab::evolution {

using spectral::Complex;
using spectral::Field;
using spectral::Spectrum;

double PerturbationState::boundary_ratio() const {
  const std::size_t n = v.size();
  const std::size_t edge = std::max<std::size_t>(1, n / 40);  // 2.5% per side
  double peak = 0.0, outer = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double a = std::abs(v[j]);
    peak = std::max(peak, a);
    if (j < edge || j >= n - edge) outer = std::max(outer, a);
  }
  return peak > 0.0 ? outer / peak : 0.0;
}

std::string_view scheme_name(Scheme s) { return s == Scheme::kEtdrk4 ? "etdrk4" : "imex2"; }

Scheme parse_scheme(std::string_view name) {
  if (name == "etdrk4") return Scheme::kEtdrk4;
  if (name == "imex2") return Scheme::kImex2;
  throw InvalidArgument("unknown scheme '" + std::string(name) + "' (etdrk4, imex2)");
}

void validate(const StepperConfig& config, const front::FrontProfile& front) {
  if (!(config.dt > 0.0) || !std::isfinite(config.dt)) throw InvalidArgument("dt must be positive");
  if (!(config.t_end >= 0.0) || !std::isfinite(config.t_end)) throw InvalidArgument("t_end must be nonnegative");
  if (config.stride == 0) throw InvalidArgument("output stride must be at least 1");
  const double jump = front.phi_minus - front.phi_plus;
  if (!(jump > 0.0)) throw InvalidArgument("front endpoints must satisfy phi_minus > phi_plus");
  if (config.terms.front && config.terms.modulation && !(config.gamma > 2.0 / jump)) {
    throw InvalidArgument("modulation gain gamma must exceed 2/(phi_minus - phi_plus)");
  }
}

namespace {

Spectrum times_ik(const Spectrum& s, const std::vector<double>& k) {
  Spectrum out(s.size());
  for (std::size_t j = 0; j + 1 < s.size(); ++j) out[j] = Complex(0.0, k[j]) * s[j];
  out.back() = 0.0;
  return out;
}

Spectrum scaled_sum(std::initializer_list<std::pair<const std::vector<Complex>*, const Spectrum*>> terms) {
  const std::size_t n = terms.begin()->second->size();
  Spectrum out(n, 0.0);
  for (const auto& [c, s] : terms) {
    for (std::size_t j = 0; j < n; ++j) out[j] += (*c)[j] * (*s)[j];
  }
  return out;
}

// Mean of f over the circle z0 + e^{i theta}; accurate where the direct formula cancels.
template <typename F>
Complex contour_mean(Complex z0, F&& f) {
  constexpr int kPoints = 64;
  Complex acc = 0.0;
  for (int i = 0; i < kPoints; ++i) {
    const double theta = 2.0 * std::numbers::pi * (i + 0.5) / kPoints;
    acc += f(z0 + std::polar(1.0, theta));
  }
  return acc / static_cast<double>(kPoints);
}

// Everything but v_xx + L v, as a half spectrum, plus x0'. phi' v + phi v_x is
// written (phi v)_x/2 + phi v_x/2 + phi' v/2 and v v_x as ((v^2)_x + v v_x)/3.
std::pair<Spectrum, double> explicit_terms(const Spectrum& v_hat, const std::vector<double>& k, const Field& phi,
                                           const Field& dphi, double gamma, const Terms& t, bool dealias) {
  const auto& g = phi.grid;
  const Field v = spectral::inverse(g, v_hat);
  const Field dv = spectral::inverse(g, times_ik(v_hat, k));
  double x0_dot = 0.0;
  if (t.front && t.modulation) x0_dot = -gamma * spectral::inner(dphi, v);
  Field pointwise(g), flux(g);
  for (std::size_t j = 0; j < g.size(); ++j) {
    double p = 0.0, f = 0.0;
    if (t.front) {
      p += x0_dot * (dv[j] + dphi[j]) - 0.5 * phi[j] * dv[j] - 0.5 * dphi[j] * v[j];
      f += 0.5 * phi[j] * v[j];
    }
    if (t.nonlinear) {
      p -= v[j] * dv[j] / 3.0;
      f += v[j] * v[j] / 3.0;
    }
    pointwise[j] = p;
    flux[j] = f;
  }
  Spectrum n_hat = spectral::forward(pointwise);
  const Spectrum df = times_ik(spectral::forward(flux), k);
  for (std::size_t j = 0; j < n_hat.size(); ++j) n_hat[j] -= df[j];
  if (dealias) spectral::dealias(n_hat);
  return {std::move(n_hat), x0_dot};
}

void check_cfl(const PerturbationState& s, const StepperConfig& c) {
  const double vmax = spectral::lp_norm(s.v, std::numeric_limits<double>::infinity());
  if (c.dt * vmax * s.v.grid.max_wavenumber() > 1.0) {
    throw InstabilityError("step guard violated: dt*|v|_inf*k_max = " +
                           std::to_string(c.dt * vmax * s.v.grid.max_wavenumber()) + " > 1");
  }
}

void check_finite(const PerturbationState& s) {
  if (!s.v.all_finite() || !std::isfinite(s.x0)) {
    throw InstabilityError("non-finite values at t = " + std::to_string(s.t));
  }
}

}  // namespace

Tendency rhs_perturbation(const PerturbationState& state, const front::FrontProfile& front,
                          const symbol::MultiplierSpec& spec, double gamma, const Terms& terms, bool dealias) {
  const auto& g = state.v.grid;
  if (!(g == front.grid())) throw InvalidArgument("perturbation and front live on different grids");
  const auto k = g.half_wavenumbers();
  const Spectrum v_hat = spectral::forward(state.v);
  auto ex = explicit_terms(v_hat, k, front.box_coefficient(), front.phi_prime, gamma, terms, dealias);
  const spectral::Multiplier l(g, spec.expr);
  const auto lv = l.values();
  for (std::size_t j = 0; j < v_hat.size(); ++j) ex.first[j] += (lv[j] - k[j] * k[j]) * v_hat[j];
  return {spectral::inverse(g, std::move(ex.first)), ex.second};
}

Stepper::Stepper(const front::FrontProfile& front, const symbol::MultiplierSpec& spec, const StepperConfig& config)
    : front_(&front),
      config_(config),
      grid_(front.grid()),
      phi_box_(front.box_coefficient()),
      phi_prime_(front.phi_prime),
      k_(grid_.half_wavenumbers()) {
  validate(config, front);
  if (!spec.admissible()) throw InvalidArgument("operator '" + spec.label + "' is not admissible");
  const spectral::Multiplier l(grid_, spec.expr);
  const auto lv = l.values();
  const std::size_t m = k_.size();
  lin_.resize(m);
  for (std::size_t j = 0; j < m; ++j) lin_[j] = -k_[j] * k_[j] + lv[j];
  const double h = config.dt;
  if (config.scheme == Scheme::kEtdrk4) {
    e_.resize(m);
    e2_.resize(m);
    q_.resize(m);
    f1_.resize(m);
    f2_.resize(m);
    f3_.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
      const Complex z = h * lin_[j];
      e_[j] = std::exp(z);
      e2_[j] = std::exp(0.5 * z);
      auto qf = [](Complex w) { return (std::exp(0.5 * w) - 1.0) / w; };
      auto g1 = [](Complex w) { return (-4.0 - w + std::exp(w) * (4.0 - 3.0 * w + w * w)) / (w * w * w); };
      auto g2 = [](Complex w) { return (2.0 + w + std::exp(w) * (w - 2.0)) / (w * w * w); };
      auto g3 = [](Complex w) { return (-4.0 - 3.0 * w - w * w + std::exp(w) * (4.0 - w)) / (w * w * w); };
      if (std::abs(z) < 2.0) {
        q_[j] = h * contour_mean(z, qf);
        f1_[j] = h * contour_mean(z, g1);
        f2_[j] = h * contour_mean(z, g2);
        f3_[j] = h * contour_mean(z, g3);
      } else {
        q_[j] = h * qf(z);
        f1_[j] = h * g1(z);
        f2_[j] = h * g2(z);
        f3_[j] = h * g3(z);
      }
    }
  } else {
    const double gam = 1.0 - 1.0 / std::numbers::sqrt2;
    implicit_inv_.resize(m);
    for (std::size_t j = 0; j < m; ++j) implicit_inv_[j] = 1.0 / (1.0 - h * gam * lin_[j]);
  }
}

Stepper::Explicit Stepper::explicit_part(const Spectrum& v_hat) const {
  auto ex = explicit_terms(v_hat, k_, phi_box_, phi_prime_, config_.gamma, config_.terms, config_.dealias);
  return {std::move(ex.first), ex.second};
}

PerturbationState Stepper::step_etdrk4(const PerturbationState& s) const {
  const Spectrum v = spectral::forward(s.v);
  const auto nv = explicit_part(v);
  const Spectrum a = scaled_sum({{&e2_, &v}, {&q_, &nv.nv}});
  const auto na = explicit_part(a);
  const Spectrum b = scaled_sum({{&e2_, &v}, {&q_, &na.nv}});
  const auto nb = explicit_part(b);
  Spectrum c(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) c[j] = e2_[j] * a[j] + q_[j] * (2.0 * nb.nv[j] - nv.nv[j]);
  const auto nc = explicit_part(c);
  Spectrum out(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    out[j] = e_[j] * v[j] + f1_[j] * nv.nv[j] + 2.0 * f2_[j] * (na.nv[j] + nb.nv[j]) + f3_[j] * nc.nv[j];
  }
  PerturbationState next;
  next.v = spectral::inverse(grid_, std::move(out));
  const double h = config_.dt;
  next.x0 = s.x0 + h * (nv.x0_dot + 2.0 * na.x0_dot + 2.0 * nb.x0_dot + nc.x0_dot) / 6.0;
  next.t = s.t + h;
  next.x0_dot_last = nv.x0_dot;
  return next;
}

PerturbationState Stepper::step_imex2(const PerturbationState& s) const {
  const double h = config_.dt;
  const double gam = 1.0 - 1.0 / std::numbers::sqrt2;
  const double del = 1.0 - 1.0 / (2.0 * gam);
  const Spectrum v = spectral::forward(s.v);
  const auto n0 = explicit_part(v);
  Spectrum u1(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) u1[j] = implicit_inv_[j] * (v[j] + h * gam * n0.nv[j]);
  const auto n1 = explicit_part(u1);
  Spectrum u2(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    u2[j] = implicit_inv_[j] *
            (v[j] + h * (del * n0.nv[j] + (1.0 - del) * n1.nv[j]) + h * (1.0 - gam) * lin_[j] * u1[j]);
  }
  PerturbationState next;
  next.v = spectral::inverse(grid_, std::move(u2));
  next.x0 = s.x0 + h * (del * n0.x0_dot + (1.0 - del) * n1.x0_dot);
  next.t = s.t + h;
  next.x0_dot_last = n0.x0_dot;
  return next;
}

PerturbationState Stepper::step(const PerturbationState& state) const {
  if (!(state.v.grid == grid_)) throw InvalidArgument("perturbation and front live on different grids");
  check_cfl(state, config_);
  PerturbationState next = config_.scheme == Scheme::kEtdrk4 ? step_etdrk4(state) : step_imex2(state);
  check_finite(next);
  return next;
}

PerturbationState step(const PerturbationState& state, const front::FrontProfile& front,
                       const symbol::MultiplierSpec& spec, const StepperConfig& config) {
  return Stepper(front, spec, config).step(state);
}

std::vector<double> NormSeries::times() const {
  std::vector<double> t;
  t.reserve(records.size());
  for (const auto& r : records) t.push_back(r.t);
  return t;
}

std::vector<double> NormSeries::column(std::string_view name) const {
  std::vector<double> out;
  out.reserve(records.size());
  auto pick = [&](auto member) {
    for (const auto& r : records) out.push_back(r.*member);
  };
  if (name == "t") pick(&NormRecord::t);
  else if (name == "l1") pick(&NormRecord::l1);
  else if (name == "l2") pick(&NormRecord::l2);
  else if (name == "linf") pick(&NormRecord::linf);
  else if (name == "dv_l2") pick(&NormRecord::dv_l2);
  else if (name == "weighted") pick(&NormRecord::weighted);
  else if (name == "x0") pick(&NormRecord::x0);
  else if (name == "x0_dot") pick(&NormRecord::x0_dot);
  else if (name == "m_t") pick(&NormRecord::m_t);
  else if (name.starts_with("lp:")) {
    const double p = std::stod(std::string(name.substr(3)));
    auto it = std::find_if(p_list.begin(), p_list.end(), [&](double q) { return std::abs(q - p) < 1e-12; });
    if (it == p_list.end()) throw InvalidArgument("series has no L^p column for p = " + std::string(name.substr(3)));
    const auto idx = static_cast<std::size_t>(it - p_list.begin());
    for (const auto& r : records) out.push_back(r.lp[idx]);
  } else {
    throw InvalidArgument("unknown series column '" + std::string(name) + "'");
  }
  return out;
}

NormRecord measure(const PerturbationState& s, std::span<const double> p_list, double previous_m_t) {
  NormRecord r;
  r.t = s.t;
  r.l1 = spectral::lp_norm(s.v, 1.0);
  r.l2 = spectral::lp_norm(s.v, 2.0);
  r.linf = spectral::lp_norm(s.v, std::numeric_limits<double>::infinity());
  for (double p : p_list) r.lp.push_back(spectral::lp_norm(s.v, p));
  r.dv_l2 = spectral::lp_norm(spectral::derivative(s.v, 1), 2.0);
  const double w = spectral::weighted_l2(s.v, 0.0);
  r.weighted = w * w;
  r.x0 = s.x0;
  r.x0_dot = s.x0_dot_last;
  r.m_t = std::max(previous_m_t, r.linf);
  return r;
}

Trajectory evolve(const Field& v0, const front::FrontProfile& front, const symbol::MultiplierSpec& spec,
                  const StepperConfig& config, const EvolveOptions& options) {
  if (!(v0.grid == front.grid())) throw InvalidArgument("perturbation and front live on different grids");
  if (!v0.all_finite()) throw InvalidArgument("initial perturbation is not finite");
  Stepper stepper(front, spec, config);
  Trajectory out;
  out.series.p_list = options.p_list;

  PerturbationState s{v0, 0.0, 0.0, 0.0};
  if (config.dealias) {
    auto hat = spectral::forward(s.v);
    spectral::dealias(hat);
    s.v = spectral::inverse(s.v.grid, std::move(hat));
  }
  if (!s.boundary_ok()) out.warnings.push_back("initial perturbation does not decay at the box edges");
  const double mass = spectral::lp_norm(s.v, 2.0);
  if (mass > 0.0) {
    const double w = spectral::weighted_l2(s.v, 0.0);
    if (w * w / (mass * mass) > 0.25 * front.grid().length()) {
      out.warnings.push_back("initial perturbation has a large weighted norm compared with its L2 norm");
    }
  }
  try {
    if (!certify::certify_front(front).satisfied) out.warnings.push_back("front is not certified");
  } catch (const Error& e) {
    out.warnings.push_back(std::string("front certification skipped: ") + e.what());
  }

  auto record = [&](const PerturbationState& st) {
    const double prev = out.series.records.empty() ? 0.0 : out.series.records.back().m_t;
    out.series.records.push_back(measure(st, options.p_list, prev));
    if (options.keep_snapshots) out.snapshots.push_back(st);
    if (options.on_snapshot) options.on_snapshot(st);
  };
  record(s);

  const auto total = static_cast<std::size_t>(std::llround(config.t_end / config.dt));
  double l2_prev = mass;
  bool edge_warned = false;
  for (std::size_t n = 1; n <= total; ++n) {
    PerturbationState next;
    try {
      next = stepper.step(s);
    } catch (const InstabilityError& e) {
      out.aborted = true;
      out.abort_reason = e.what();
      break;
    }
    next.t = static_cast<double>(n) * config.dt;
    const double l2 = spectral::lp_norm(next.v, 2.0);
    if (l2_prev > 0.0) {
      const double ratio = l2 / l2_prev - 1.0;
      out.audit.worst_ratio = std::max(out.audit.worst_ratio, ratio);
      if (ratio > 1e-10) ++out.audit.violations;
    } else if (l2 > 0.0) {
      ++out.audit.violations;
      out.audit.worst_ratio = std::numeric_limits<double>::infinity();
    }
    l2_prev = l2;
    s = std::move(next);
    ++out.steps;
    if (!edge_warned && !s.boundary_ok()) {
      out.warnings.push_back("perturbation reached the box edges at t = " + std::to_string(s.t));
      edge_warned = true;
    }
    if (n % config.stride == 0 || n == total) record(s);
  }
  out.final_state = s;
  if (out.audit.violations > 0) {
    out.warnings.push_back("|v|_2 increased on " + std::to_string(out.audit.violations) + " steps");
  }
  return out;
}

Field reconstruct_solution(const PerturbationState& s, const front::FrontProfile& front) {
  const auto& g = front.grid();
  const Field w = spectral::shift(front.correction, -s.x0);
  const Field v = spectral::shift(s.v, -s.x0);
  Field u(g);
  for (std::size_t j = 0; j < g.size(); ++j) u[j] = front::tanh_background(g.x(j) - s.x0) + w[j] + v[j];
  return u;
}

PerturbationKind parse_perturbation_kind(std::string_view name) {
  if (name == "gaussian") return PerturbationKind::kGaussian;
  if (name == "odd_gaussian_derivative" || name == "odd") return PerturbationKind::kOddGaussianDerivative;
  if (name == "odd_sine_packet") return PerturbationKind::kOddSinePacket;
  if (name == "random_bandlimited") return PerturbationKind::kRandomBandlimited;
  throw InvalidArgument("unknown perturbation kind '" + std::string(name) + "'");
}

std::string_view perturbation_kind_name(PerturbationKind k) {
  switch (k) {
    case PerturbationKind::kGaussian: return "gaussian";
    case PerturbationKind::kOddGaussianDerivative: return "odd_gaussian_derivative";
    case PerturbationKind::kOddSinePacket: return "odd_sine_packet";
    case PerturbationKind::kRandomBandlimited: return "random_bandlimited";
  }
  return "?";
}

Field make_perturbation(const spectral::Grid& g, PerturbationKind kind, double amplitude, double width,
                        std::uint64_t seed) {
  if (!(amplitude > 0.0) || !(width > 0.0)) throw InvalidArgument("amplitude and width must be positive");
  const auto n = g.size();
  Field v(g);
  switch (kind) {
    case PerturbationKind::kGaussian:
      for (std::size_t j = 0; j < n; ++j) {
        const double y = g.x(j) / width;
        v[j] = amplitude * std::exp(-y * y);
      }
      return v;
    case PerturbationKind::kOddGaussianDerivative:
      for (std::size_t j = 0; j < n; ++j) {
        const double y = g.x(j) / width;
        v[j] = -amplitude * y * std::exp(-y * y);
      }
      break;
    case PerturbationKind::kOddSinePacket:
      for (std::size_t j = 0; j < n; ++j) {
        const double y = g.x(j) / width;
        v[j] = amplitude * std::sin(2.0 * y) * std::exp(-y * y);
      }
      break;
    case PerturbationKind::kRandomBandlimited: {
      std::mt19937_64 rng(seed);
      std::normal_distribution<double> normal;
      const auto k = g.half_wavenumbers();
      Spectrum hat(g.half_size(), 0.0);
      for (std::size_t j = 1; j + 1 < hat.size(); ++j) {
        const double a = normal(rng), b = normal(rng);
        if (k[j] <= 2.0 / width) hat[j] = Complex(a, b);
      }
      v = spectral::inverse(g, std::move(hat));
      double peak = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double y = g.x(j) / (8.0 * width);
        v[j] *= std::exp(-y * y);
        peak = std::max(peak, std::abs(v[j]));
      }
      if (peak > 0.0) v *= amplitude / peak;
      return v;
    }
  }
  // antisymmetrize on the grid
  Field odd(g);
  for (std::size_t j = 0; j < n; ++j) odd[j] = 0.5 * (v[j] - v[g.mirror(j)]);
  return odd;
}

}  // namespace frontlab::evolution
