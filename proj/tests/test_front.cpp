#include <gtest/gtest.h>

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <filesystem>
#include <limits>
#include <vector>

#include "frontlab/certify.hpp"
#include "frontlab/error.hpp"
#include "frontlab/front.hpp"
#include "frontlab/spectral.hpp"

using namespace frontlab;
using spectral::Field;
using spectral::Grid;

namespace {

// Explicit KdV-Burgers front for nu = -6/25 in normalized variables.
double explicit_front(double y) {
  const double s = 1.0 / std::cosh(5.0 * y / 12.0);
  return 0.5 * s * s - std::tanh(5.0 * y / 12.0);
}

// Zero of the explicit front (it is decreasing from 1 to -1).
double explicit_front_root() {
  std::uintmax_t iters = 200;
  const auto r = boost::math::tools::toms748_solve([](double y) { return explicit_front(y); }, -5.0, 5.0,
                                                   boost::math::tools::eps_tolerance<double>(60), iters);
  return 0.5 * (r.first + r.second);
}

double max_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

const Grid& box80() {
  static const Grid g(1024, 80.0);
  return g;
}

}  // namespace

TEST(ClosedForm, BurgersFront) {
  const auto f = front::closed_form_burgers(box80());
  const std::size_t mid = box80().size() / 2;
  EXPECT_EQ(box80().x(mid), 0.0);
  EXPECT_NEAR(f.phi[mid], 0.0, 1e-15);
  EXPECT_NEAR(f.phi_prime[mid], -0.5, 1e-12);
  EXPECT_EQ(f.phi_minus, 1.0);
  EXPECT_EQ(f.phi_plus, -1.0);
  EXPECT_LE(f.residual_sup, 1e-10);
  EXPECT_LE(front::profile_residual(f), 1e-10);
  EXPECT_TRUE(f.monotone());
}

TEST(Shooting, ExplicitKdvBurgersFront) {
  const double y0 = explicit_front_root();
  ASSERT_GT(y0, 0.0);
  const auto f = front::shoot_local_front(-6.0 / 25.0, box80());
  double err = 0.0;
  for (std::size_t j = 0; j < box80().size(); ++j) {
    const double x = box80().x(j);
    if (j == 0) continue;  // wrap point
    err = std::max(err, std::abs(f.phi[j] - explicit_front(x + y0)));
  }
  EXPECT_LE(err, 1e-7);
  EXPECT_TRUE(f.monotone());
  EXPECT_LE(f.residual_sup, 1e-10);
  // before re-phasing the explicit profile sits at 1/2
  EXPECT_DOUBLE_EQ(explicit_front(0.0), 0.5);
}

TEST(Shooting, MonotoneExactlyUpToQuarter) {
  const certify::SweepOptions opts;
  for (double nu : {-0.26, -0.24, -0.1, 0.1, 0.24, 0.25, 0.26, 0.4, 1.0}) {
    const auto g = certify::sweep_grid(nu, opts);
    const auto f = front::shoot_local_front(nu, g);
    const bool expect = std::abs(nu) <= 0.25;
    EXPECT_EQ(f.monotone(), expect) << "nu = " << nu << " max phi' = " << f.max_slope();
  }
  const auto f1 = front::shoot_local_front(1.0, certify::sweep_grid(1.0, opts));
  EXPECT_GT(f1.max_slope(), 1e-6);
}

TEST(Shooting, RejectsZeroNu) { EXPECT_THROW(front::shoot_local_front(0.0, box80()), InvalidArgument); }

TEST(Newton, ExactGuessConvergesAtOnce) {
  const auto guess = front::closed_form_burgers(box80());
  const auto f = front::newton_front(symbol::burgers(), box80(), guess);
  EXPECT_LE(f.iterations, 1);
  EXPECT_LE(spectral::lp_norm(f.correction, std::numeric_limits<double>::infinity()), 1e-12);
}

TEST(Newton, KdvBurgersFromTanhGuess) {
  const double nu = -6.0 / 25.0;
  const auto f = front::newton_front(symbol::kdvb(nu), box80(), front::closed_form_burgers(box80()));
  const auto s = front::shoot_local_front(nu, box80());
  EXPECT_LE(max_diff(f.phi, s.phi), 1e-7);
  EXPECT_LE(f.residual_sup, 1e-10);
}

TEST(Newton, FractionalFrontIsOdd) {
  const auto spec = symbol::fractional({{0.5, 0.5}});
  const auto f = front::newton_front(spec, box80(), front::closed_form_burgers(box80()));
  EXPECT_LE(f.residual_sup, 1e-8);
  double odd = 0.0;
  for (std::size_t j = 1; j < box80().size(); ++j) odd = std::max(odd, std::abs(f.phi[j] + f.phi[box80().mirror(j)]));
  EXPECT_LE(odd, 1e-8);
  EXPECT_TRUE(f.monotone());
}

TEST(Newton, SolveFrontHandlesNonlocalPresets) {
  // Algebraic tails of L phi leave a constant source on the periodic box;
  // the rest of the residual must be at tolerance and the source must shrink
  // with the box.
  const Grid wide(2048, 160.0);
  for (const auto& spec : {symbol::benjamin_ono(), symbol::hilbert(), symbol::fractional({{1.0, 0.5}})}) {
    const auto f = front::solve_front(spec, box80());
    Field r = front::profile_residual_field(f.correction, spec);
    double mean = 0.0;
    for (double v : r.values) mean += v / static_cast<double>(r.size());
    double dev = 0.0;
    for (double v : r.values) dev = std::max(dev, std::abs(v - mean));
    EXPECT_LE(dev, 1e-8) << spec.label;
    EXPECT_NEAR(std::abs(f.box_forcing), std::abs(mean), 1e-8) << spec.label;
    EXPECT_NEAR(f.phi[box80().size() / 2], 0.0, 1e-12) << spec.label;
    if (f.box_forcing != 0.0) {
      const auto fw = front::solve_front(spec, wide);
      EXPECT_LT(std::abs(fw.box_forcing), 0.75 * std::abs(f.box_forcing)) << spec.label;
    }
  }
}

TEST(Residual, TanhAgainstKdvBurgers) {
  auto candidate = front::closed_form_burgers(box80());
  candidate.op = symbol::kdvb(0.2);
  // -phi'' + phi phi' = 0 for the tanh profile, so the residual is
  // 0.2 max |d^3 tanh(x/2)/dx^3| = (0.2/8) max |4 S T^2 - 2 S^2|, S = sech^2, T = tanh
  double oracle = 0.0;
  for (int i = -200000; i <= 200000; ++i) {
    const double z = i * 1e-4;
    const double T = std::tanh(z), S = 1.0 - T * T;
    oracle = std::max(oracle, std::abs(4 * S * T * T - 2 * S * S));
  }
  oracle *= 0.2 / 8.0;
  EXPECT_NEAR(oracle, 0.05, 1e-12);
  EXPECT_NEAR(front::profile_residual(candidate), oracle, 1e-8);
}

TEST(Residual, SensitiveToPerturbation) {
  const auto f = front::shoot_local_front(-0.1, box80());
  const double base = front::profile_residual(f);
  Field w = f.correction;
  for (std::size_t j = 0; j < w.size(); ++j) w[j] += 1e-3 / std::cosh(box80().x(j));
  const auto p = front::assemble_profile(w, f.op, "perturbed");
  EXPECT_GE(front::profile_residual(p), 10.0 * base);
  EXPECT_GE(front::profile_residual(p), 1e-4);
}

TEST(Galilean, NormalizedEndpointsUnchanged) {
  const auto [p, spec] = front::galilean_normalize(1.0, -1.0, symbol::kdvb(0.3));
  EXPECT_EQ(p.c, 0.0);
  EXPECT_EQ(p.lambda, 1.0);
  for (double k : {-3.0, 0.5, 2.0}) EXPECT_EQ(symbol::eval_symbol(spec.expr, k), symbol::eval_symbol(symbol::kdvb(0.3).expr, k));
}

TEST(Galilean, ExplicitFrontParameters) {
  const auto [p, spec] = front::galilean_normalize(0.0, -24.0 / 5.0, symbol::kdvb(-0.1));
  EXPECT_NEAR(p.c, -1.0, 1e-15);
  EXPECT_NEAR(p.lambda, 12.0 / 5.0, 1e-15);
  EXPECT_NEAR(std::abs(symbol::eval_symbol(spec.expr, 1.0) - symbol::eval_symbol(symbol::kdvb(-0.24).expr, 1.0)), 0.0,
              1e-14);
  EXPECT_THROW(front::galilean_normalize(-1.0, 1.0, symbol::burgers()), InvalidArgument);
  EXPECT_THROW(front::galilean_normalize(1.0, 1.0, symbol::burgers()), InvalidArgument);
}

TEST(Galilean, RoundTripEndpoints) {
  for (auto [um, up] : std::vector<std::pair<double, double>>{{1, -1}, {0, -4.8}, {3.5, 0.25}, {-2, -7}}) {
    const auto [p, spec] = front::galilean_normalize(um, up, symbol::burgers());
    EXPECT_NEAR(p.reconstructed_minus(), um, 1e-12);
    EXPECT_NEAR(p.reconstructed_plus(), up, 1e-12);
  }
}

TEST(Galilean, IdentityDenormalization) {
  const auto f = front::shoot_local_front(-0.1, box80());
  front::GalileanParams id;
  const Grid target(512, 40.0);
  const Field u = front::denormalize_solution(f.phi, id, target);
  for (std::size_t j = 0; j < target.size(); ++j) {
    const std::size_t k = j + 256;  // same point on the 80-box
    ASSERT_EQ(target.x(j), box80().x(k));
    EXPECT_NEAR(u[j], f.phi[k], 1e-12);
  }
}

TEST(Galilean, ReproducesExplicitSolution) {
  const auto f = front::shoot_local_front(-6.0 / 25.0, box80());
  const auto [p, spec] = front::galilean_normalize(0.0, -24.0 / 5.0, symbol::kdvb(-0.1));
  const Grid target(512, 32.0);
  const Field u = front::denormalize_solution(f.phi, p, target);
  const double s = 5.0 * explicit_front_root() / 12.0;
  double err = 0.0;
  for (std::size_t j = 0; j < target.size(); ++j) {
    const double x = target.x(j) + s;
    const double sech = 1.0 / std::cosh(x);
    err = std::max(err, std::abs(u[j] - 1.2 * (sech * sech - 2 * std::tanh(x) - 2)));
  }
  EXPECT_LE(err, 1e-7);
  EXPECT_THROW(front::denormalize_solution(f.phi, p, Grid(512, 80.0)), InvalidArgument);
}

// invariants

TEST(FrontInvariant, EndpointsAndMomentTails) {
  std::vector<front::FrontProfile> fronts{front::closed_form_burgers(box80())};
  for (double nu : {-0.24, -0.1, 0.1, 0.2}) fronts.push_back(front::shoot_local_front(nu, box80()));
  for (const auto& f : fronts) {
    const auto& h = f.hypotheses;
    EXPECT_LE(h.endpoint_error, 1e-8) << f.op.label;
    EXPECT_LE(f.residual_sup, 1e-10) << f.op.label;
    EXPECT_TRUE(std::isfinite(h.phi_prime_l2) && std::isfinite(h.phi_second_l2) && std::isfinite(h.first_moment));
    EXPECT_LE(h.tail_fraction, 1e-6) << f.op.label;
    EXPECT_TRUE(h.edge_decayed) << f.op.label;
  }
}

TEST(FrontInvariant, ShootingAndNewtonAgree) {
  for (double nu : {-0.24, -0.1, 0.2}) {
    const auto s = front::shoot_local_front(nu, box80());
    const auto n = front::newton_front(symbol::kdvb(nu), box80(), front::closed_form_burgers(box80()));
    EXPECT_LE(max_diff(s.phi, n.phi), 1e-6) << "nu = " << nu;
  }
}

TEST(FrontInvariant, MonotonicityThresholdSweep) {
  const certify::SweepOptions opts;
  double last_monotone = 0.0, first_not = 10.0;
  for (double nu = 0.05; nu <= 0.6 + 1e-12; nu += 0.01) {
    const auto f = front::shoot_local_front(nu, certify::sweep_grid(nu, opts));
    if (f.monotone()) last_monotone = std::max(last_monotone, nu);
    else first_not = std::min(first_not, nu);
  }
  EXPECT_NEAR(last_monotone, 0.25, 0.01);
  EXPECT_NEAR(first_not, 0.26, 0.01);
  EXPECT_GT(first_not, last_monotone);
}

TEST(FrontIo, ProfileRoundTrip) {
  const auto f = front::shoot_local_front(-0.2, box80());
  const auto dir = std::filesystem::temp_directory_path() / "frontlab_front_io";
  std::filesystem::create_directories(dir);
  front::write_profile(dir / "front.csv", f);
  ASSERT_TRUE(std::filesystem::exists(dir / "front.json"));
  const auto r = front::read_profile(dir / "front.csv");
  EXPECT_EQ(r.grid(), f.grid());
  EXPECT_LE(max_diff(r.phi, f.phi), 1e-15);
  EXPECT_LE(std::abs(r.residual_sup - f.residual_sup), 1e-12);
  EXPECT_THROW(front::read_profile(dir / "nope.csv"), IoError);
}
