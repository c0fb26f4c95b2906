#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "frontlab/diagnostics.hpp"
#include "frontlab/error.hpp"
#include "frontlab/evolution.hpp"
#include "frontlab/front.hpp"

using namespace frontlab;
using evolution::PerturbationKind;
using evolution::PerturbationState;
using evolution::StepperConfig;
using spectral::Field;
using spectral::Grid;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const Grid& box80() {
  static const Grid g(1024, 80.0);
  return g;
}

double max_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

double oddness(const Field& v) {
  double m = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) m = std::max(m, std::abs(v[j] + v[v.grid.mirror(j)]));
  return m;
}

PerturbationState state_of(const Field& v) {
  PerturbationState s;
  s.v = v;
  return s;
}

Field gaussian(const Grid& g, double a, double w) {
  return Field::sample(g, [=](double x) { return a * std::exp(-(x / w) * (x / w)); });
}

}  // namespace

TEST(Rhs, ZeroPerturbationIsSteady) {
  const auto f = front::shoot_local_front(-0.2, box80());
  const auto t = evolution::rhs_perturbation(state_of(Field(box80())), f, f.op, 1.1);
  EXPECT_EQ(t.x0_dot, 0.0);
  EXPECT_EQ(spectral::lp_norm(t.dv, kInf), 0.0);
}

TEST(Rhs, OddPerturbationHasNoDrift) {
  const auto f = front::closed_form_burgers(box80());
  const auto v = evolution::make_perturbation(box80(), PerturbationKind::kOddGaussianDerivative, 0.7, 1.3);
  const auto t = evolution::rhs_perturbation(state_of(v), f, f.op, 1.1);
  EXPECT_LE(std::abs(t.x0_dot), 1e-15);
}

TEST(Rhs, MatchesLinearizationForSmallData) {
  // Frechet oracle in plain (non-skew) form:
  //   v_xx + L v - phi' v - phi v_x + x0'(v) phi',  x0'(v) = -gamma <phi', v>
  const auto f = front::shoot_local_front(-0.2, box80());
  const double gamma = 1.3;
  const Field s = Field::sample(box80(), [](double x) { return 1.0 / std::cosh(x); });
  const Field lin_l = spectral::apply_multiplier(s, f.op.expr);
  const Field sx = spectral::derivative(s, 1), sxx = spectral::derivative(s, 2);
  const double drift = -gamma * spectral::inner(f.phi_prime, s);
  Field oracle(box80());
  for (std::size_t j = 0; j < box80().size(); ++j) {
    oracle[j] = sxx[j] + lin_l[j] - f.phi_prime[j] * s[j] - f.phi[j] * sx[j] + drift * f.phi_prime[j];
  }
  for (double delta : {1e-6, 1e-4}) {
    const auto t = evolution::rhs_perturbation(state_of(delta * s), f, f.op, gamma);
    EXPECT_LE(max_diff((1.0 / delta) * t.dv, oracle), 5.0 * delta) << delta;
    EXPECT_NEAR(t.x0_dot / delta, drift, 1e-10);
  }
}

TEST(Step, BurgersFrontWithZeroPerturbation) {
  const auto f = front::closed_form_burgers(box80());
  StepperConfig c;
  const evolution::Stepper st(f, symbol::burgers(), c);
  PerturbationState s = state_of(Field(box80()));
  for (int i = 0; i < 20; ++i) {
    s = st.step(s);
    EXPECT_LE(spectral::lp_norm(s.v, kInf), 1e-13);
    EXPECT_EQ(s.x0, 0.0);
  }
  EXPECT_NEAR(s.t, 0.2, 1e-14);
}

TEST(Step, LinearModeDecaysExactly) {
  const auto f = front::closed_form_burgers(box80());
  const auto spec = symbol::fractional({{1.0, 0.5}});
  for (auto scheme : {evolution::Scheme::kEtdrk4, evolution::Scheme::kImex2}) {
    StepperConfig c;
    c.dt = 0.01;
    c.scheme = scheme;
    c.terms = {false, false, false};
    const double k = box80().wavenumber(5);
    const Field v0 = Field::sample(box80(), [k](double x) { return std::cos(k * x); });
    const auto s1 = evolution::step(state_of(v0), f, spec, c);
    const double factor = std::exp(c.dt * (-k * k - std::abs(k)));
    if (scheme == evolution::Scheme::kEtdrk4) {
      EXPECT_LE(max_diff(s1.v, factor * v0), 1e-10);
    } else {
      // second order: local error O(dt^3 (k^2 + |k|)^3)
      EXPECT_LE(max_diff(s1.v, factor * v0), 1e-8);
    }
  }
}

TEST(Step, TemporalConvergenceOrders) {
  const auto f = front::shoot_local_front(-0.2, box80());
  const Field v0 = gaussian(box80(), 0.5, 1.0);
  auto run = [&](evolution::Scheme scheme, double dt) {
    StepperConfig c;
    c.dt = dt;
    c.scheme = scheme;
    c.t_end = 1.0;
    c.stride = 1000000;
    const evolution::Stepper st(f, f.op, c);
    PerturbationState s = state_of(v0);
    const int n = static_cast<int>(std::lround(1.0 / dt));
    for (int i = 0; i < n; ++i) s = st.step(s);
    return s;
  };
  struct Case {
    evolution::Scheme scheme;
    double dt;
    double ratio;
    double tol;
  };
  for (const Case& cs : {Case{evolution::Scheme::kEtdrk4, 0.02, 16.0, 3.0}, Case{evolution::Scheme::kImex2, 0.01, 4.0, 0.6}}) {
    const auto ref = run(cs.scheme, cs.dt / 8);
    const auto a = run(cs.scheme, cs.dt);
    const auto b = run(cs.scheme, cs.dt / 2);
    const double ea = max_diff(a.v, ref.v), eb = max_diff(b.v, ref.v);
    EXPECT_NEAR(ea / eb, cs.ratio, cs.tol) << evolution::scheme_name(cs.scheme) << " " << ea << " " << eb;
  }
}

TEST(Step, GuardAndNonFiniteValues) {
  const auto f = front::closed_form_burgers(box80());
  StepperConfig c;
  c.dt = 0.1;
  EXPECT_THROW(evolution::step(state_of(gaussian(box80(), 10.0, 1.0)), f, symbol::burgers(), c), InstabilityError);
  c.dt = 0.01;
  Field bad = gaussian(box80(), 0.1, 1.0);
  bad[100] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(evolution::step(state_of(bad), f, symbol::burgers(), c), InstabilityError);
}

TEST(Step, ValidatesConfig) {
  const auto f = front::closed_form_burgers(box80());
  StepperConfig c;
  c.gamma = 0.9;
  EXPECT_THROW(evolution::validate(c, f), InvalidArgument);
  c.gamma = 1.1;
  c.dt = 0.0;
  EXPECT_THROW(evolution::validate(c, f), InvalidArgument);
  c.dt = 0.01;
  c.stride = 0;
  EXPECT_THROW(evolution::validate(c, f), InvalidArgument);
  EXPECT_THROW(evolution::Stepper(f, symbol::make_spec(symbol::parse_symbol("k^2"), "bad"), StepperConfig{}),
               InvalidArgument);
}

TEST(Evolve, ZeroDataStaysZero) {
  const auto f = front::closed_form_burgers(box80());
  StepperConfig c;
  c.t_end = 2.0;
  const auto tr = evolution::evolve(Field(box80()), f, symbol::burgers(), c);
  ASSERT_FALSE(tr.aborted);
  for (const char* col : {"l1", "l2", "linf", "dv_l2", "weighted", "x0", "lp:1.5", "lp:4"}) {
    for (double v : tr.series.column(col)) EXPECT_EQ(v, 0.0) << col;
  }
}

TEST(Evolve, BurgersGaussianDecaysMonotonically) {
  const auto f = front::closed_form_burgers(box80());
  StepperConfig c;
  c.t_end = 50.0;
  const Field v0 = gaussian(box80(), 0.5, 1.0);
  const auto tr = evolution::evolve(v0, f, symbol::burgers(), c);
  ASSERT_FALSE(tr.aborted);
  EXPECT_EQ(tr.audit.violations, 0u);
  EXPECT_EQ(diagnostics::monotonicity_audit(tr.series).violations, 0u);
  EXPECT_LT(spectral::lp_norm(tr.final_state.v, 2), 0.05 * spectral::lp_norm(v0, 2));
  EXPECT_NEAR(tr.series.records.back().t, 50.0, 1e-9);
}

TEST(Evolve, LargePerturbationOfExplicitFront) {
  const auto f = front::shoot_local_front(-6.0 / 25.0, box80());
  StepperConfig c;
  c.t_end = 20.0;
  const Field v0 = gaussian(box80(), 2.0, 2.0);
  ASSERT_GT(spectral::lp_norm(v0, 2), 2.0);
  const auto tr = evolution::evolve(v0, f, f.op, c);
  ASSERT_FALSE(tr.aborted) << tr.abort_reason;
  EXPECT_EQ(tr.audit.violations, 0u);
  EXPECT_LT(spectral::lp_norm(tr.final_state.v, 2), spectral::lp_norm(v0, 2));
}

TEST(Evolve, ReconstructionOfUnperturbedFront) {
  const auto f = front::shoot_local_front(0.1, box80());
  const auto u = evolution::reconstruct_solution(state_of(Field(box80())), f);
  for (std::size_t j = 1; j < box80().size(); ++j) EXPECT_NEAR(u[j], f.phi[j], 1e-13);
}

TEST(ColeHopf, SteadyFront) {
  const Field u0 = Field::sample(box80(), [](double x) { return -std::tanh(0.5 * x); });
  std::vector<double> xs;
  for (double x = -30.0; x <= 30.0; x += 0.37) xs.push_back(x);
  for (double t : {0.5, 2.0, 10.0}) {
    const auto u = evolution::cole_hopf_exact(u0, t, xs);
    for (std::size_t i = 0; i < xs.size(); ++i) EXPECT_NEAR(u[i], -std::tanh(0.5 * xs[i]), 1e-8) << t << " " << xs[i];
  }
}

TEST(ColeHopf, ConstantData) {
  const Field u0 = Field::sample(box80(), [](double) { return 0.7; });
  const std::vector<double> xs{-10.0, -1.0, 0.0, 3.3, 12.0};
  const auto u = evolution::cole_hopf_exact(u0, 1.5, xs);
  for (double v : u) EXPECT_NEAR(v, 0.7, 1e-12);
}

TEST(ColeHopf, AgreesWithSpectralEvolution) {
  const auto f = front::closed_form_burgers(box80());
  const Field v0 = gaussian(box80(), 0.3, 1.0);
  const Field u0 = Field::sample(box80(), [](double x) { return -std::tanh(0.5 * x) + 0.3 * std::exp(-x * x); });
  StepperConfig c;
  c.dt = 1e-3;
  c.t_end = 1.0;
  const auto tr = evolution::evolve(v0, f, symbol::burgers(), c);
  ASSERT_FALSE(tr.aborted);
  const auto u = evolution::reconstruct_solution(tr.final_state, f);
  const auto exact = evolution::cole_hopf_exact(u0, 1.0);
  EXPECT_LE(max_diff(u, exact), 1e-6);
  EXPECT_NE(tr.final_state.x0, 0.0);
}

TEST(Perturbation, OddGaussianDerivative) {
  const auto v = evolution::make_perturbation(box80(), PerturbationKind::kOddGaussianDerivative, 1.0, 1.0);
  EXPECT_EQ(oddness(v), 0.0);
  for (std::size_t j = 1; j < box80().size(); ++j) {
    const double x = box80().x(j);
    EXPECT_NEAR(v[j], -x * std::exp(-x * x), 1e-15);
  }
}

TEST(Perturbation, GaussianMass) {
  for (auto [a, w] : std::vector<std::pair<double, double>>{{1.0, 1.0}, {0.3, 2.5}, {2.0, 0.7}}) {
    const auto v = evolution::make_perturbation(box80(), PerturbationKind::kGaussian, a, w);
    EXPECT_NEAR(spectral::lp_norm(v, 1.0), a * w * std::sqrt(std::numbers::pi), 1e-10);
  }
}

TEST(Perturbation, SeededRandomFieldsAreReproducible) {
  const auto a = evolution::make_perturbation(box80(), PerturbationKind::kRandomBandlimited, 0.5, 1.0, 17);
  const auto b = evolution::make_perturbation(box80(), PerturbationKind::kRandomBandlimited, 0.5, 1.0, 17);
  const auto c = evolution::make_perturbation(box80(), PerturbationKind::kRandomBandlimited, 0.5, 1.0, 18);
  EXPECT_EQ(a.values, b.values);
  EXPECT_NE(a.values, c.values);
  EXPECT_NEAR(spectral::lp_norm(a, kInf), 0.5, 1e-14);
  EXPECT_TRUE(state_of(a).boundary_ok());
}

TEST(Perturbation, OddSinePacketAndErrors) {
  const auto v = evolution::make_perturbation(box80(), PerturbationKind::kOddSinePacket, 0.4, 1.5);
  EXPECT_EQ(oddness(v), 0.0);
  EXPECT_THROW(evolution::parse_perturbation_kind("square"), InvalidArgument);
  EXPECT_EQ(evolution::parse_perturbation_kind("odd"), PerturbationKind::kOddGaussianDerivative);
  EXPECT_THROW(evolution::make_perturbation(box80(), PerturbationKind::kGaussian, 0.0, 1.0), InvalidArgument);
  EXPECT_THROW(evolution::make_perturbation(box80(), PerturbationKind::kGaussian, 1.0, -1.0), InvalidArgument);
}

// invariants

TEST(EvolutionInvariant, SteadyStateForEveryPreset) {
  const std::vector<symbol::MultiplierSpec> specs{symbol::burgers(), symbol::kdvb(0.2), symbol::kdvb(-6.0 / 25.0),
                                                  symbol::benjamin_ono(), symbol::hilbert(),
                                                  symbol::fractional({{1.0, 0.5}})};
  for (const auto& spec : specs) {
    const auto f = front::solve_front(spec, box80());
    StepperConfig c;
    c.dt = 0.1;
    c.t_end = 100.0;
    c.stride = 100;
    const auto tr = evolution::evolve(Field(box80()), f, spec, c);
    ASSERT_FALSE(tr.aborted) << spec.label;
    EXPECT_LE(spectral::lp_norm(tr.final_state.v, kInf), 1e-12) << spec.label;
    for (double v : tr.series.column("linf")) EXPECT_LE(v, 1e-12) << spec.label;
  }
}

TEST(EvolutionInvariant, ParityPreservedByOddFront) {
  const auto spec = symbol::fractional({{0.5, 0.5}});
  const auto f = front::solve_front(spec, box80());
  StepperConfig c;
  c.t_end = 10.0;
  c.stride = 5;
  evolution::EvolveOptions opts;
  opts.keep_snapshots = true;
  const auto v0 = evolution::make_perturbation(box80(), PerturbationKind::kOddGaussianDerivative, 0.8, 1.0);
  const auto tr = evolution::evolve(v0, f, spec, c, opts);
  ASSERT_FALSE(tr.aborted);
  for (const auto& s : tr.snapshots) {
    EXPECT_LE(oddness(s.v), 1e-10) << s.t;
    EXPECT_LE(std::abs(s.x0), 1e-14) << s.t;
  }
}

TEST(EvolutionInvariant, PureHeatEnergyConstant) {
  const auto f = front::closed_form_burgers(box80());
  StepperConfig c;
  c.t_end = 5.0;
  c.stride = 1;
  c.terms = {false, false, false};
  const auto tr = evolution::evolve(gaussian(box80(), 0.5, 1.0), f, symbol::burgers(), c);
  const auto e = diagnostics::check_energy_inequality(tr.series);
  EXPECT_NEAR(e.c_fit, 2.0, 0.02);
  EXPECT_EQ(e.violations, 0u);
}

TEST(EvolutionInvariant, CumulativeBounds) {
  const std::vector<symbol::MultiplierSpec> specs{symbol::burgers(), symbol::kdvb(-0.2), symbol::benjamin_ono()};
  for (const auto& spec : specs) {
    const auto f = front::solve_front(spec, box80());
    for (auto kind : {PerturbationKind::kGaussian, PerturbationKind::kOddGaussianDerivative}) {
      StepperConfig c;
      c.t_end = 20.0;
      c.stride = 1;
      const auto tr = evolution::evolve(evolution::make_perturbation(box80(), kind, 1.0, 1.0), f, spec, c);
      ASSERT_FALSE(tr.aborted);
      EXPECT_TRUE(diagnostics::cumulative_bounds(tr.series).within(10.0)) << spec.label;
    }
  }
}
