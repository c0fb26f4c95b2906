#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "frontlab/error.hpp"
#include "frontlab/spectral.hpp"
#include "frontlab/symbol.hpp"
#include "support.hpp"

using namespace frontlab;
using symbol::Complex;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> probe_wavenumbers() {
  std::vector<double> ks;
  for (int i = -40; i <= 40; ++i) ks.push_back(0.37 * i);
  ks.push_back(2 * kPi);
  ks.push_back(-2 * kPi);
  return ks;
}

}  // namespace

TEST(SymbolParse, ZeroIsTheBurgersSymbol) {
  const auto e = symbol::parse_symbol("0");
  for (double k : probe_wavenumbers()) EXPECT_EQ(symbol::eval_symbol(e, k), Complex(0.0, 0.0));
}

TEST(SymbolParse, KdvBurgersInDerivativeForm) {
  const auto e = symbol::parse_symbol("-0.1*(i*k)^3");
  for (double k : probe_wavenumbers()) {
    const Complex ik(0.0, k);
    const Complex want = -0.1 * ik * ik * ik;
    EXPECT_NEAR(std::abs(symbol::eval_symbol(e, k) - want), 0.0, 1e-13 * (1 + std::abs(want))) << k;
  }
}

TEST(SymbolParse, ReportsOffsetOfSyntaxError) {
  try {
    symbol::parse_symbol("k^^2");
    FAIL() << "no error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 2u);
  }
}

TEST(SymbolParse, RejectsUnknownNamesAndBadExponents) {
  EXPECT_THROW(symbol::parse_symbol("q*k"), ParseError);
  EXPECT_THROW(symbol::parse_symbol("k^0.5"), Error);
  EXPECT_NO_THROW(symbol::parse_symbol("abs(k)^0.5"));
  EXPECT_THROW(symbol::parse_symbol("(k"), ParseError);
  EXPECT_THROW(symbol::parse_symbol(""), Error);
}

TEST(SymbolParse, PrecedenceOfPowerAndUnaryMinus) {
  // -k^2 is -(k^2); 2^3^2 is 2^9
  EXPECT_NEAR(symbol::eval_symbol(symbol::parse_symbol("-k^2"), 3.0).real(), -9.0, 1e-15);
  EXPECT_NEAR(symbol::eval_symbol(symbol::parse_symbol("2^3^2"), 1.0).real(), 512.0, 1e-12);
  EXPECT_NEAR(symbol::eval_symbol(symbol::parse_symbol("1+2*3"), 1.0).real(), 7.0, 1e-15);
}

TEST(SymbolEval, ParametersAndFractionalPower) {
  const symbol::ParameterMap params{{"a", 1.0}, {"alpha", 0.5}};
  const auto e = symbol::parse_symbol("-a*abs(k)^(2*alpha)", params);
  const Complex v = symbol::eval_symbol(e, 2 * kPi);
  EXPECT_NEAR(v.real(), -2 * kPi, 1e-12);
  EXPECT_NEAR(v.imag(), 0.0, 1e-15);
}

TEST(SymbolEval, HilbertSign) {
  const auto e = symbol::parse_symbol("i*sgn(k)");
  const Complex v = symbol::eval_symbol(e, -5.0);
  EXPECT_EQ(v, Complex(0.0, -1.0));
}

TEST(SymbolEval, ZeroBaseCube) {
  EXPECT_EQ(symbol::eval_symbol(symbol::parse_symbol("(i*k)^3"), 0.0), Complex(0.0, 0.0));
}

TEST(SymbolEval, SingularityAtOriginConvention) {
  // sgn-like ratio: symmetrized limit vanishes, value 0
  const auto odd = symbol::parse_symbol("i*k/abs(k)");
  EXPECT_EQ(symbol::eval_symbol(odd, 0.0), Complex(0.0, 0.0));
  // 1/|k| does not vanish under symmetrization
  const auto bad = symbol::parse_symbol("-1/abs(k)");
  EXPECT_THROW(symbol::eval_symbol(bad, 0.0), InvalidArgument);
}

TEST(SymbolAdmissibility, KdvBurgersPassesForAnyNu) {
  const auto samples = symbol::default_admissibility_samples();
  for (double nu : {-3.0, -0.1, 0.0, 0.25, 7.0}) {
    const auto e = symbol::parse_symbol("nu*(i*k)^3", {{"nu", nu}});
    const auto r = symbol::validate_admissibility(e, samples);
    EXPECT_TRUE(r.passed) << nu << " " << r.detail;
  }
}

TEST(SymbolAdmissibility, AntiDissipativeRejected) {
  const auto r = symbol::validate_admissibility(symbol::parse_symbol("k^2"), symbol::default_admissibility_samples());
  EXPECT_FALSE(r.dissipative);
  EXPECT_FALSE(r.passed);
  EXPECT_GT(r.max_re, 0.0);
}

TEST(SymbolAdmissibility, FirstOrderFractionalPasses) {
  const auto r =
      symbol::validate_admissibility(symbol::parse_symbol("-(abs(k))^1"), symbol::default_admissibility_samples());
  EXPECT_TRUE(r.passed) << r.detail;
}

TEST(SymbolAdmissibility, FlagsAreIndependent) {
  const auto samples = symbol::default_admissibility_samples();
  const auto shifted = symbol::validate_admissibility(symbol::parse_symbol("-1-k^2"), samples);
  EXPECT_FALSE(shifted.zero_at_origin);
  EXPECT_TRUE(shifted.hermitian);
  EXPECT_FALSE(shifted.passed);
  const auto skew = symbol::validate_admissibility(symbol::parse_symbol("i*k^2"), samples);
  EXPECT_FALSE(skew.hermitian);
  EXPECT_FALSE(skew.passed);
}

TEST(SymbolPreset, KdvbValue) {
  const auto s = symbol::kdvb(1.0);
  const Complex v = symbol::eval_symbol(s.expr, 2 * kPi);
  EXPECT_NEAR(v.real(), 0.0, 1e-12);
  EXPECT_NEAR(v.imag(), -8 * kPi * kPi * kPi, 1e-9);
  EXPECT_NEAR(v.imag(), -248.050, 1e-3);
}

TEST(SymbolPreset, FractionalValue) {
  const auto s = symbol::fractional({{1.0, 0.5}});
  EXPECT_NEAR(symbol::eval_symbol(s.expr, 2 * kPi).real(), -2 * kPi, 1e-12);
  EXPECT_TRUE(s.admissible());
}

TEST(SymbolPreset, FractionalParameterErrors) {
  EXPECT_THROW(symbol::fractional({{1.0, 1.2}}), InvalidArgument);
  EXPECT_THROW(symbol::fractional({{-1.0, 0.5}}), InvalidArgument);
  EXPECT_THROW(symbol::fractional({{1.0, 0.6}, {1.0, 0.4}}), InvalidArgument);
  EXPECT_THROW(symbol::preset("nonsense"), InvalidArgument);
}

TEST(SymbolPreset, AllPresetsAdmissible) {
  for (const auto& s : {symbol::burgers(), symbol::kdvb(-0.1), symbol::benjamin_ono(), symbol::hilbert(),
                        symbol::fractional({{1.0, 0.25}, {0.5, 0.75}})}) {
    EXPECT_TRUE(s.admissible()) << s.label << " " << s.admissibility.detail;
  }
}

TEST(SymbolPreset, ClosedFormValues) {
  // bo: i k |k|, hilbert: i sgn k
  for (double k : probe_wavenumbers()) {
    const Complex bo = symbol::eval_symbol(symbol::benjamin_ono().expr, k);
    EXPECT_NEAR(std::abs(bo - Complex(0.0, k * std::abs(k))), 0.0, 1e-12 * (1 + k * k));
    const Complex hb = symbol::eval_symbol(symbol::hilbert().expr, k);
    const double sg = k > 0 ? 1.0 : (k < 0 ? -1.0 : 0.0);
    EXPECT_NEAR(std::abs(hb - Complex(0.0, sg)), 0.0, 1e-15);
  }
}

TEST(SymbolRescale, KdvbScalesNu) {
  const double nu = -0.24;
  for (double lambda : {0.5, 1.0, 2.4, 7.0}) {
    const auto r = symbol::rescale_symbol(symbol::kdvb(nu), lambda);
    const auto want = symbol::kdvb(nu * lambda);
    EXPECT_TRUE(r.admissible());
    for (double k : probe_wavenumbers()) {
      const Complex a = symbol::eval_symbol(r.expr, k), b = symbol::eval_symbol(want.expr, k);
      EXPECT_NEAR(std::abs(a - b), 0.0, 1e-12 * (1 + std::abs(b)));
    }
  }
}

TEST(SymbolRescale, UnitScaleIsIdentity) {
  const auto s = symbol::benjamin_ono();
  const auto r = symbol::rescale_symbol(s, 1.0);
  for (double k : probe_wavenumbers()) EXPECT_EQ(symbol::eval_symbol(r.expr, k), symbol::eval_symbol(s.expr, k));
}

TEST(SymbolRescale, FractionalCoefficient) {
  const double a = 1.3, alpha = 0.4, lambda = 2.4;
  const auto r = symbol::rescale_symbol(symbol::fractional({{a, alpha}}), lambda);
  const auto want = symbol::fractional({{a * std::pow(lambda, 2 * alpha - 2), alpha}});
  for (double k : probe_wavenumbers()) {
    const Complex x = symbol::eval_symbol(r.expr, k), y = symbol::eval_symbol(want.expr, k);
    EXPECT_NEAR(std::abs(x - y), 0.0, 1e-12 * (1 + std::abs(y)));
  }
}

TEST(SymbolRescale, RejectsNonpositiveScale) {
  EXPECT_THROW(symbol::rescale_symbol(symbol::burgers(), 0.0), InvalidArgument);
}

// properties

TEST(SymbolProperty, RescaledPresetsStayAdmissible) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const std::vector<symbol::MultiplierSpec> presets{symbol::burgers(), symbol::kdvb(0.3), symbol::kdvb(-1.1),
                                                    symbol::benjamin_ono(), symbol::hilbert(),
                                                    symbol::fractional({{1.0, 0.5}, {2.0, 0.9}})};
  for (int trial = 0; trial < 20; ++trial) {
    const double lambda = std::exp(u(rng));
    for (const auto& s : presets) {
      EXPECT_TRUE(symbol::rescale_symbol(s, lambda).admissible()) << s.label << " lambda " << lambda;
    }
  }
}

TEST(SymbolProperty, PresetTextMatchesPresetTree) {
  struct Case {
    const char* name;
    symbol::PresetParams params;
  };
  const std::vector<Case> cases{{"burgers", {}},
                                {"kdvb", {-0.1, {}}},
                                {"bo", {}},
                                {"hilbert", {}},
                                {"frac", {0.0, {{1.0, 0.5}, {0.25, 0.8}}}}};
  for (const auto& c : cases) {
    const auto tree = symbol::preset(c.name, c.params);
    const auto parsed = symbol::parse_symbol(symbol::preset_text(c.name, c.params));
    for (double k : probe_wavenumbers()) {
      const Complex a = symbol::eval_symbol(parsed, k), b = symbol::eval_symbol(tree.expr, k);
      EXPECT_LE(std::abs(a - b), 1e-14 * (1 + std::abs(b))) << c.name << " k=" << k;
    }
  }
}

TEST(SymbolProperty, HermitianSymbolsKeepRealFieldsReal) {
  std::mt19937_64 rng(11);
  const spectral::Grid g(512, 60.0);
  const std::vector<symbol::MultiplierSpec> presets{symbol::kdvb(0.7), symbol::benjamin_ono(), symbol::hilbert(),
                                                    symbol::fractional({{1.0, 0.3}})};
  for (int trial = 0; trial < 25; ++trial) {
    const auto f = checks::random_packet(g, rng, 8.0);
    for (const auto& s : presets) EXPECT_NO_THROW(spectral::apply_multiplier(f, s.expr)) << s.label;
  }
  // the checked path rejects a non-Hermitian symbol
  const auto f = checks::random_packet(g, rng, 8.0);
  EXPECT_THROW(spectral::apply_multiplier(f, symbol::parse_symbol("i*k^2")), InvalidArgument);
}
