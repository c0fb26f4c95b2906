#include "frontlab/front.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numeric>

#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>
#include <json.hpp>

#include "frontlab/error.hpp"
#include "frontlab/field_io.hpp"

namespace frontlab::front {

using spectral::Complex;
using spectral::Field;
using spectral::Grid;
using spectral::Spectrum;

namespace {

double sech2(double z) {
  const double c = std::cosh(z);
  return 1.0 / (c * c);
}

// Background pieces on a grid: B, B', B'' and L B.
struct Background {
  Field b;
  Field b1;
  Field b2;
  Field lb;
};

// l(k)/(ik) on the half spectrum, 0 at k = 0.
std::vector<Complex> integrated_symbol(const Grid& g, const symbol::SymbolExpr& expr) {
  const auto k = g.half_wavenumbers();
  auto l = symbol::eval_symbol(expr, k);
  std::vector<Complex> q(k.size());
  for (std::size_t j = 1; j < k.size(); ++j) q[j] = l[j] / Complex(0.0, k[j]);
  q[0] = 0.0;
  return q;
}

Background make_background(const Grid& g, const symbol::MultiplierSpec& op) {
  Background bg{Field::sample(g, tanh_background),
                Field::sample(g, [](double x) { return tanh_background_derivative(x, 1); }),
                Field::sample(g, [](double x) { return tanh_background_derivative(x, 2); }),
                Field(g)};
  spectral::Multiplier q(g, integrated_symbol(g, op.expr));
  bg.lb = q.apply(bg.b1);
  bg.b = box_background(g);
  bg.b2[0] = 0.0;
  return bg;
}

struct Pieces {
  Field phi;
  Field phi1;
  Field phi2;
  Field residual;
};

Pieces evaluate_pieces(const Background& bg, const spectral::Multiplier& ell, const Field& w) {
  Field phi = bg.b + w;
  Field phi1 = bg.b1 + spectral::derivative(w, 1);
  Field phi2 = bg.b2 + spectral::derivative(w, 2);
  Field lw = ell.apply(w);
  Field res(w.grid);
  for (std::size_t j = 0; j < w.size(); ++j) {
    res[j] = -phi2[j] + phi[j] * phi1[j] - (bg.lb[j] + lw[j]);
  }
  return {std::move(phi), std::move(phi1), std::move(phi2), std::move(res)};
}

double sup_norm(const Field& f) { return spectral::lp_norm(f, INFINITY); }

HypothesisReport hypothesis_report(const Field& phi, const Field& phi1, const Field& phi2) {
  const Grid& g = phi.grid;
  HypothesisReport r;
  r.phi_prime_l2 = spectral::lp_norm(phi1, 2.0);
  r.phi_second_l2 = spectral::lp_norm(phi2, 2.0);
  const double h = g.spacing();
  const double half = 0.5 * g.length();
  double total = 0.0;
  double tail = 0.0;
  double edge = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double x = g.x(j);
    const double m = (1.0 + std::abs(x)) * std::abs(phi1[j]) * h;
    total += m;
    if (std::abs(x) > 0.8 * half) tail += m;
    if (std::abs(x) > 0.9 * half) edge = std::max(edge, std::abs(phi1[j]));
  }
  r.first_moment = total;
  r.tail_fraction = total > 0.0 ? tail / total : 0.0;
  r.edge_phi_prime = edge;
  r.edge_decayed = edge <= 1e-10;
  const std::size_t n = g.size();
  r.endpoint_error = std::max(std::abs(phi[1] - 1.0), std::abs(phi[n - 1] + 1.0));
  return r;
}

// ---------------------------------------------------------------------------
// Restarted GMRES with right preconditioning, on plain vectors.

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

struct GmresResult {
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;
  double min_r_diag = 0.0;  // smallest |R_ii| seen: crude smallest-singular-value estimate
};

template <typename Op, typename Prec>
GmresResult gmres(const Op& apply, const Prec& precondition, const Vec& b, Vec& x, int restart,
                  int max_iter, double tol) {
  GmresResult out;
  out.min_r_diag = INFINITY;
  const std::size_t n = b.size();
  const double target = tol * norm(b);
  x.assign(n, 0.0);
  if (norm(b) == 0.0) {
    out.converged = true;
    return out;
  }
  Vec r = b;
  while (out.iterations < max_iter) {
    const double beta = norm(r);
    out.residual = beta;
    if (beta <= target) {
      out.converged = true;
      return out;
    }
    const int m = restart;
    std::vector<Vec> v(m + 1, Vec(n));
    std::vector<Vec> z(m, Vec(n));
    std::vector<std::vector<double>> hmat(m + 1, std::vector<double>(m, 0.0));
    std::vector<double> cs(m), sn(m), gvec(m + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) v[0][i] = r[i] / beta;
    gvec[0] = beta;
    int used = 0;
    for (int j = 0; j < m && out.iterations < max_iter; ++j) {
      ++out.iterations;
      z[j] = precondition(v[j]);
      Vec w = apply(z[j]);
      for (int i = 0; i <= j; ++i) {  // modified Gram-Schmidt
        hmat[i][j] = dot(w, v[i]);
        for (std::size_t p = 0; p < n; ++p) w[p] -= hmat[i][j] * v[i][p];
      }
      hmat[j + 1][j] = norm(w);
      if (hmat[j + 1][j] > 0.0) {
        for (std::size_t p = 0; p < n; ++p) v[j + 1][p] = w[p] / hmat[j + 1][j];
      }
      for (int i = 0; i < j; ++i) {
        const double t = cs[i] * hmat[i][j] + sn[i] * hmat[i + 1][j];
        hmat[i + 1][j] = -sn[i] * hmat[i][j] + cs[i] * hmat[i + 1][j];
        hmat[i][j] = t;
      }
      const double denom = std::hypot(hmat[j][j], hmat[j + 1][j]);
      cs[j] = denom > 0.0 ? hmat[j][j] / denom : 1.0;
      sn[j] = denom > 0.0 ? hmat[j + 1][j] / denom : 0.0;
      hmat[j][j] = denom;
      hmat[j + 1][j] = 0.0;
      gvec[j + 1] = -sn[j] * gvec[j];
      gvec[j] = cs[j] * gvec[j];
      out.min_r_diag = std::min(out.min_r_diag, std::abs(denom));
      used = j + 1;
      if (std::abs(gvec[j + 1]) <= target || denom == 0.0) break;
    }
    // Back substitution and update.
    std::vector<double> y(used);
    for (int i = used - 1; i >= 0; --i) {
      double s = gvec[i];
      for (int k = i + 1; k < used; ++k) s -= hmat[i][k] * y[k];
      y[i] = hmat[i][i] != 0.0 ? s / hmat[i][i] : 0.0;
    }
    for (int i = 0; i < used; ++i) {
      for (std::size_t p = 0; p < n; ++p) x[p] += y[i] * z[i][p];
    }
    Vec ax = apply(x);
    for (std::size_t p = 0; p < n; ++p) r[p] = b[p] - ax[p];
  }
  out.residual = norm(r);
  out.converged = out.residual <= target;
  return out;
}

// Bordered linearization of the profile operator around phi:
//   [ J       1 ] [delta]   [-F]
//   [ phi'^T  0 ] [sigma] = [ 0]
// The last row pins the translation mode, either by orthogonality to phi' or
// by fixing the value at x = 0. On the box J 1 = phi', so phi' lies
// in the range of J and cannot serve as the border column; the constant does
// not. Vectors carry N+1 entries.
class BorderedJacobian {
 public:
  BorderedJacobian(const Pieces& p, const symbol::MultiplierSpec& op, bool center_pin)
      : grid_(p.phi.grid), phi_(p.phi.values), phi1_(p.phi1.values), center_pin_(center_pin) {
    const auto k = grid_.half_wavenumbers();
    const auto l = symbol::eval_symbol(op.expr, k);
    k_ = k;
    diag_.resize(k.size());
    prec_.resize(k.size());
    for (std::size_t j = 0; j < k.size(); ++j) {
      diag_[j] = k[j] * k[j] - l[j];
      // The advection coefficient phi is frozen at unit magnitude.
      prec_[j] = k[j] * k[j] + std::abs(k[j]) - l[j];
    }
    diag_.back() = Complex(diag_.back().real(), 0.0);
    prec_.back() = Complex(prec_.back().real(), 0.0);
    prec_[0] = 1.0;
    for (auto& q : prec_) {
      if (std::abs(q) < 1e-14) q = 1.0;
    }
  }

  Vec operator()(const Vec& z) const {
    const std::size_t n = grid_.size();
    Field df(grid_, Vec(z.begin(), z.begin() + static_cast<long>(n)));
    const double sigma = z[n];
    Spectrum s = spectral::forward(df);
    Spectrum ds(s.size());
    for (std::size_t j = 0; j < s.size(); ++j) ds[j] = Complex(0.0, k_[j]) * s[j];
    ds.back() = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j) s[j] *= diag_[j];
    Field lin = spectral::inverse(grid_, std::move(s));
    Field dprime = spectral::inverse(grid_, std::move(ds));
    const double h = grid_.spacing();
    Vec out(n + 1);
    double proj = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      out[j] = lin[j] + phi1_[j] * df[j] + phi_[j] * dprime[j] + sigma;
      proj += phi1_[j] * df[j];
    }
    out[n] = center_pin_ ? df[n / 2] : h * proj;
    return out;
  }

  Vec precondition(const Vec& r) const {
    const std::size_t n = grid_.size();
    Spectrum s = spectral::forward(Field(grid_, Vec(r.begin(), r.begin() + static_cast<long>(n))));
    for (std::size_t j = 0; j < s.size(); ++j) s[j] /= prec_[j];
    Vec out = spectral::inverse(grid_, std::move(s)).values;
    out.push_back(r[n]);
    return out;
  }

 private:
  Grid grid_;
  const Vec& phi_;
  const Vec& phi1_;
  std::vector<double> k_;
  bool center_pin_;
  std::vector<Complex> diag_;
  std::vector<Complex> prec_;
};

bool is_zero_symbol(const symbol::SymbolExpr& expr) {
  for (double k : {0.3, 1.0, 2.7, 11.0, -4.2}) {
    if (std::abs(symbol::eval_symbol(expr, k)) != 0.0) return false;
  }
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------

double tanh_background(double x) { return -std::tanh(0.5 * x); }

double tanh_background_derivative(double x, int order) {
  const double t = std::tanh(0.5 * x);
  const double s = sech2(0.5 * x);
  switch (order) {
    case 0:
      return -t;
    case 1:
      return -0.5 * s;
    case 2:
      return 0.5 * s * t;
    case 3:
      return 0.5 * s * (0.5 * s - t * t);
    default:
      throw InvalidArgument("background derivative order must be 0..3");
  }
}

Field box_background(const Grid& g) {
  Field b = Field::sample(g, tanh_background);
  b[0] = 0.0;
  return b;
}

Field FrontProfile::box_coefficient() const {
  Field c = phi;
  c[0] = correction[0];
  return c;
}

double FrontProfile::max_slope() const {
  return *std::max_element(phi_prime.values.begin(), phi_prime.values.end());
}

FrontProfile assemble_profile(Field correction, const symbol::MultiplierSpec& op, std::string method) {
  const Grid g = correction.grid;
  if (!correction.all_finite()) throw ConvergenceError("front correction is not finite");
  Background bg = make_background(g, op);
  spectral::Multiplier ell(g, op.expr);
  Pieces p = evaluate_pieces(bg, ell, correction);
  // Stored samples use the analytic background everywhere; the box value at
  // the wrap point only enters the operator.
  p.phi[0] = tanh_background(g.x(0)) + correction[0];
  HypothesisReport report = hypothesis_report(p.phi, p.phi1, p.phi2);
  FrontProfile out{std::move(p.phi), std::move(p.phi1), std::move(correction), 1.0, -1.0, op,
                   sup_norm(p.residual), 0.0, report, std::move(method), 0, {}};
  if (!report.edge_decayed) {
    out.warnings.push_back("phi' does not decay below 1e-10 near the box edge (max " +
                           io::format_double(report.edge_phi_prime) + ")");
  }
  return out;
}

Field profile_residual_field(const Field& correction, const symbol::MultiplierSpec& op) {
  Background bg = make_background(correction.grid, op);
  spectral::Multiplier ell(correction.grid, op.expr);
  return evaluate_pieces(bg, ell, correction).residual;
}

double profile_residual(const FrontProfile& candidate) {
  return sup_norm(profile_residual_field(candidate.correction, candidate.op));
}

FrontProfile closed_form_burgers(const Grid& g) {
  return assemble_profile(Field(g), symbol::burgers(), "closed_form");
}

// ---------------------------------------------------------------------------
// Shooting

FrontProfile shoot_local_front(double nu, const Grid& g, double tol) {
  if (nu == 0.0 || !std::isfinite(nu)) throw InvalidArgument("shooting needs a finite nonzero nu");
  if (!(tol > 0.0)) throw InvalidArgument("shooting tolerance must be positive");
  namespace ode = boost::numeric::odeint;
  using State = std::array<double, 2>;

  const double mu = std::abs(nu);
  // Unstable eigenvalue of phi = 1 for  mu p'' + p' - p = 0, and the quadratic
  // coefficient of the unstable manifold p = -d E + a d^2 E^2, E = e^{r y}.
  const double r = (-1.0 + std::sqrt(1.0 + 4.0 * mu)) / (2.0 * mu);
  const double a2 = 1.0 / (2.0 * (4.0 * mu * r * r + 2.0 * r - 1.0));
  const double delta = 1e-5;
  auto manifold = [&](double y) {
    const double e = delta * std::exp(r * y);
    return -e + a2 * e * e;
  };
  // State is (p, p') with p = phi - 1, so the departure from phi = 1 keeps
  // full relative precision; the phase of the front depends on it.
  const auto rhs = [mu](const State& s, State& ds, double) {
    ds[0] = s[1];
    ds[1] = -(s[1] - s[0] - 0.5 * s[0] * s[0]) / mu;
  };
  const double step_tol = std::min(1e-13, 1e-3 * tol);
  auto make_stepper = [&] {
    return ode::make_controlled(1e-15, step_tol, ode::runge_kutta_dopri5<State>());
  };
  const State start{manifold(0.0), -delta * r + 2.0 * r * a2 * delta * delta};

  // Pass 1: march until phi changes sign, recording a bracket.
  State s = start;
  double y = 0.0;
  double dy = 1e-3;
  State before = s;
  double y_before = 0.0;
  const double y_max = 400.0 / std::min(1.0, r) + 50.0;
  {
    auto stepper = make_stepper();
    while (s[0] > -1.0) {
      before = s;
      y_before = y;
      for (int tries = 0; tries < 500; ++tries) {
        if (stepper.try_step(rhs, s, y, dy) == ode::success) break;
      }
      if (!std::isfinite(s[0]) || std::abs(s[0]) > 10.0 || y > y_max) {
        throw ConvergenceError("shooting: no connection from phi = 1 to phi = -1 found");
      }
    }
  }
  // Bisection on the crossing point inside the bracket.
  auto value_at = [&](double target) {
    State st = before;
    if (target > y_before) ode::integrate_adaptive(make_stepper(), rhs, st, y_before, target, 1e-3);
    return st[0] + 1.0;
  };
  double lo = y_before;
  double hi = y;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (value_at(mid) > 0.0 ? lo : hi) = mid;
  }
  const double crossing = 0.5 * (lo + hi);

  // Pass 2: sample on the grid. For nu < 0 the front is -phi(-x).
  const std::size_t n = g.size();
  const double sign = nu > 0.0 ? 1.0 : -1.0;
  std::vector<double> ys(n);
  for (std::size_t j = 0; j < n; ++j) ys[j] = sign * g.x(j) + crossing;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ys[a] < ys[b]; });

  std::vector<double> phi(n);
  std::vector<double> times{0.0};
  std::vector<std::size_t> idx;
  for (std::size_t j : order) {
    if (ys[j] < 0.0) {
      phi[j] = 1.0 + manifold(ys[j]);
    } else if (ys[j] > 0.0) {
      times.push_back(ys[j]);
      idx.push_back(j);
    } else {
      phi[j] = 1.0 + start[0];
    }
  }
  if (!idx.empty()) {
    State st = start;
    std::size_t pos = 0;
    ode::integrate_times(make_stepper(), rhs, st, times.begin(), times.end(), 1e-3,
                         [&](const State& x, double t) {
                           if (t == 0.0) return;
                           if (!std::isfinite(x[0]) || std::abs(x[0]) > 10.0) {
                             throw ConvergenceError("shooting: trajectory left the bounded region");
                           }
                           phi[idx[pos++]] = 1.0 + x[0];
                         });
  }
  Field w(g);
  // For nu < 0 the samples were taken at -x; the reflection also flips the sign.
  for (std::size_t j = 0; j < n; ++j) w[j] = sign * phi[j] - tanh_background(g.x(j));
  FrontProfile out = assemble_profile(std::move(w), symbol::kdvb(nu), "shoot");
  out.iterations = 1;
  return out;
}

// ---------------------------------------------------------------------------
// Newton

namespace {

// Residual with its constant component removed, and that component.
std::pair<double, double> split_residual(const Field& f) {
  double mean = 0.0;
  for (double v : f.values) mean += v;
  mean /= static_cast<double>(f.size());
  double sup = 0.0;
  for (double v : f.values) sup = std::max(sup, std::abs(v - mean));
  return {sup, mean};
}

double merit(const Field& f) {
  const double mean = split_residual(f).second;
  double s = 0.0;
  for (double v : f.values) s += (v - mean) * (v - mean);
  return std::sqrt(s);
}

}  // namespace

FrontProfile newton_front(const symbol::MultiplierSpec& spec, const Grid& g,
                          const FrontProfile& initial_guess, const NewtonOptions& options) {
  if (!spec.admissible()) throw InvalidArgument("newton_front: operator is not admissible");
  if (!(initial_guess.grid() == g)) throw InvalidArgument("newton_front: guess lives on another grid");
  Background bg = make_background(g, spec);
  spectral::Multiplier ell(g, spec.expr);

  Field w = initial_guess.correction;
  Pieces p = evaluate_pieces(bg, ell, w);
  // Converged when the residual is below tol; with allow_box_forcing only its
  // non-constant part has to be.
  auto done = [&](const Field& r) {
    return options.allow_box_forcing ? split_residual(r).first <= options.tol
                                     : sup_norm(r) <= options.tol;
  };
  int iter = 0;
  while (!done(p.residual)) {
    const double res = sup_norm(p.residual);
    if (iter >= options.max_iter) {
      throw ConvergenceError("newton_front: no convergence after " + std::to_string(iter) +
                             " iterations (residual " + io::format_double(res) + ")");
    }
    ++iter;
    const bool center_pin = options.pin == NewtonOptions::Pin::kCenterValue;
    BorderedJacobian jac(p, spec, center_pin);
    Vec rhs(p.residual.values);
    for (double& v : rhs) v = -v;
    rhs.push_back(center_pin ? -p.phi[g.size() / 2] : 0.0);
    Vec delta;
    GmresResult gr = gmres([&](const Vec& d) { return jac(d); },
                           [&](const Vec& d) { return jac.precondition(d); }, rhs, delta,
                           options.gmres_restart, options.gmres_max_iter, options.gmres_rel_tol);
    if (!gr.converged && gr.residual > 1e-2 * norm(rhs)) {
      throw ConvergenceError("newton_front: singular or ill-conditioned linearization (smallest |R_ii| " +
                             io::format_double(gr.min_r_diag) + ")");
    }
    // Backtracking on the residual with its constant part removed; the
    // constant part is what the border column absorbs.
    const double m0 = merit(p.residual);
    double step = 1.0;
    bool accepted = false;
    for (int k = 0; k < 12; ++k, step *= 0.5) {
      Field trial = w;
      for (std::size_t j = 0; j < trial.size(); ++j) trial[j] += step * delta[j];
      Pieces q = evaluate_pieces(bg, ell, trial);
      if (q.residual.all_finite() && merit(q.residual) < m0) {
        w = std::move(trial);
        p = std::move(q);
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (done(p.residual)) break;
      throw ConvergenceError("newton_front: line search failed at residual " + io::format_double(res) +
                             " (constant part " + io::format_double(split_residual(p.residual).second) +
                             ")");
    }
  }
  FrontProfile out = assemble_profile(std::move(w), spec, "newton");
  out.iterations = iter;
  if (options.rephase && options.pin == NewtonOptions::Pin::kOrthogonal) {
    rephase(out);
    out.iterations = iter;
  }
  const double forcing = split_residual(profile_residual_field(out.correction, spec)).second;
  if (options.allow_box_forcing && std::abs(forcing) > options.tol) {
    out.box_forcing = -forcing;
    out.warnings.push_back("profile solves the box equation only up to a constant source " +
                           io::format_double(-forcing) + " (slowly decaying tails of L phi)");
  }
  return out;
}

double rephase(FrontProfile& profile) {
  const Grid& g = profile.grid();
  spectral::Interpolator wi(profile.correction);
  auto f = [&](double x) { return tanh_background(x) + wi(x); };
  const std::size_t center = g.size() / 2;  // x = 0
  if (f(0.0) == 0.0) return 0.0;
  // Nearest sign change to the center.
  std::size_t lo = 0;
  bool found = false;
  for (std::size_t d = 0; d + 1 < g.size() / 2 && !found; ++d) {
    for (long s : {-1L, 1L}) {
      const long a = static_cast<long>(center) + s * static_cast<long>(d) - (s < 0 ? 1 : 0);
      if (a < 1 || a + 1 >= static_cast<long>(g.size())) continue;
      if (profile.phi[a] * profile.phi[a + 1] <= 0.0) {
        lo = static_cast<std::size_t>(a);
        found = true;
        break;
      }
    }
  }
  if (!found) throw ConvergenceError("rephase: profile has no zero crossing");
  boost::uintmax_t max_iter = 200;
  auto tolf = boost::math::tools::eps_tolerance<double>(52);
  auto [a, b] = boost::math::tools::toms748_solve(f, g.x(lo), g.x(lo + 1), tolf, max_iter);
  const double s = 0.5 * (a + b);
  if (s == 0.0) return 0.0;
  Field w = spectral::shift(profile.correction, s);
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double x = g.x(j);
    w[j] += tanh_background(x + s) - tanh_background(x);
  }
  const int iterations = profile.iterations;
  FrontProfile moved = assemble_profile(std::move(w), profile.op, profile.method);
  moved.iterations = iterations;
  profile = std::move(moved);
  return s;
}

bool match_kdvb(const symbol::SymbolExpr& expr, double& nu) {
  const double candidate = -symbol::eval_symbol(expr, 1.0).imag();
  for (double k : {0.3, 1.0, 2.7, 11.0, -4.2}) {
    const Complex l = symbol::eval_symbol(expr, k);
    const Complex want(0.0, -candidate * k * k * k);
    if (std::abs(l - want) > 1e-12 * (1.0 + std::abs(want))) return false;
  }
  nu = candidate;
  return true;
}

FrontProfile solve_front(const symbol::MultiplierSpec& spec, const Grid& g, const NewtonOptions& options) {
  if (!spec.admissible()) throw InvalidArgument("operator is not admissible: " + spec.admissibility.detail);
  if (is_zero_symbol(spec.expr)) {
    FrontProfile out = closed_form_burgers(g);
    out.op = spec;
    return out;
  }
  double nu = 0.0;
  if (match_kdvb(spec.expr, nu)) {
    FrontProfile out = shoot_local_front(nu, g, options.tol);
    out.op = spec;
    if (out.residual_sup > options.tol) {
      // Polish the sampled shooting profile on the spectral grid.
      NewtonOptions polish = options;
      FrontProfile polished = newton_front(spec, g, out, polish);
      polished.method = "shoot+newton";
      return polished;
    }
    return out;
  }
  const FrontProfile guess = closed_form_burgers(g);
  // The box breaks translation invariance at the level of the slowly decaying
  // tails, so the phase is pinned inside the solve instead of by re-phasing.
  NewtonOptions nonlocal = options;
  nonlocal.allow_box_forcing = true;
  nonlocal.pin = NewtonOptions::Pin::kCenterValue;
  try {
    return newton_front(spec, g, guess, nonlocal);
  } catch (const ConvergenceError&) {
    // Homotopy in the operator strength: L_s = s L.
  }
  FrontProfile current = guess;
  for (double s : {0.2, 0.4, 0.6, 0.8, 1.0}) {
    symbol::MultiplierSpec partial =
        s == 1.0 ? spec
                 : symbol::make_spec(symbol::SymbolExpr::constant(s) * spec.expr, spec.label);
    NewtonOptions o = nonlocal;
    current = newton_front(partial, g, current, o);
  }
  current.method = "newton+homotopy";
  return current;
}

// ---------------------------------------------------------------------------
// Galilean normalization

std::pair<GalileanParams, symbol::MultiplierSpec> galilean_normalize(double u_minus, double u_plus,
                                                                     const symbol::MultiplierSpec& spec) {
  if (!(u_minus > u_plus)) throw InvalidArgument("galilean_normalize requires u_minus > u_plus");
  GalileanParams p;
  p.u_minus = u_minus;
  p.u_plus = u_plus;
  p.c = (u_minus + u_plus) / (u_minus - u_plus);
  p.lambda = 0.5 * (u_minus - u_plus);
  return {p, symbol::rescale_symbol(spec, p.lambda)};
}

Field denormalize_solution(const Field& normalized, const GalileanParams& params, const Grid& target,
                           double t) {
  if (!(params.lambda > 0.0)) throw InvalidArgument("denormalize: lambda must be positive");
  const Grid& src = normalized.grid;
  Field w = normalized;
  for (std::size_t j = 0; j < src.size(); ++j) w[j] -= tanh_background(src.x(j));
  spectral::Interpolator wi(w);
  const double half = 0.5 * src.length();
  const double lam = params.lambda;
  Field out(target);
  for (std::size_t j = 0; j < target.size(); ++j) {
    const double y = lam * target.x(j) - params.c * lam * lam * t;
    if (y < -half || y > half) {
      throw InvalidArgument("denormalize: point x = " + io::format_double(target.x(j)) +
                            " maps outside the normalized box");
    }
    out[j] = lam * (tanh_background(y) + wi(y)) + params.c * lam;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Persistence

void write_profile(const std::filesystem::path& csv_path, const FrontProfile& profile) {
  io::write_columns_csv(csv_path, {"x", "phi", "phi_prime"},
                        {profile.grid().points(), profile.phi.values, profile.phi_prime.values});
  nlohmann::json j;
  j["operator"] = profile.op.expr.to_string();
  j["label"] = profile.op.label;
  double nu = 0.0;
  if (match_kdvb(profile.op.expr, nu)) j["nu"] = nu;
  j["method"] = profile.method;
  j["iterations"] = profile.iterations;
  j["residual_sup"] = profile.residual_sup;
  j["box_forcing"] = profile.box_forcing;
  j["endpoints"] = {profile.phi_minus, profile.phi_plus};
  j["grid"] = {{"N", profile.grid().size()}, {"L", profile.grid().length()}};
  j["monotone"] = profile.monotone();
  j["max_slope"] = profile.max_slope();
  const auto& h = profile.hypotheses;
  j["hypothesis_report"] = {{"phi_prime_L2", h.phi_prime_l2},     {"phi_second_L2", h.phi_second_l2},
                            {"first_moment", h.first_moment},     {"tail_fraction", h.tail_fraction},
                            {"edge_phi_prime", h.edge_phi_prime}, {"edge_decayed", h.edge_decayed},
                            {"endpoint_error", h.endpoint_error}};
  j["warnings"] = profile.warnings;
  auto json_path = csv_path;
  json_path.replace_extension(".json");
  std::ofstream out(json_path);
  if (!out) throw IoError("cannot write " + json_path.string());
  out << j.dump(2) << '\n';
}

FrontProfile read_profile(const std::filesystem::path& csv_path) {
  if (!std::filesystem::exists(csv_path)) throw IoError("profile not found: " + csv_path.string());
  io::CsvTable table = io::read_columns_csv(csv_path);
  const auto& x = table.column("x");
  const auto& phi = table.column("phi");
  auto json_path = csv_path;
  json_path.replace_extension(".json");
  std::ifstream in(json_path);
  if (!in) throw IoError("profile sidecar not found: " + json_path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("bad profile sidecar " + json_path.string() + ": " + e.what());
  }
  const std::size_t n = j.at("grid").at("N").get<std::size_t>();
  const double length = j.at("grid").at("L").get<double>();
  if (n != x.size()) throw IoError("profile CSV length does not match its sidecar");
  Grid g(n, length);
  auto spec = symbol::make_spec(symbol::parse_symbol(j.at("operator").get<std::string>()),
                                j.value("label", std::string("custom")));
  Field w(g);
  for (std::size_t i = 0; i < n; ++i) w[i] = phi[i] - tanh_background(g.x(i));
  FrontProfile out = assemble_profile(std::move(w), spec, j.value("method", std::string("file")));
  out.iterations = j.value("iterations", 0);
  return out;
}

}  // namespace frontlab::front
