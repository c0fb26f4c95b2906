#ifndef FRONTLAB_SYMBOL_HPP_
#define FRONTLAB_SYMBOL_HPP_

// Fourier-multiplier symbols l(k) for the operator L in
//   u_t - u_xx + u u_x = L u.
//
// The variable `k` is the angular wavenumber: d/dx acts as multiplication by
// i*k, so the third derivative is written "(i*k)^3" and the fractional
// Laplacian (-d_xx)^alpha as "abs(k)^(2*alpha)".

#include <complex>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace frontlab::symbol {

using Complex = std::complex<double>;
using ParameterMap = std::map<std::string, double, std::less<>>;

struct Node;

// Immutable expression tree over k. Copies share structure.
class SymbolExpr {
 public:
  SymbolExpr();  // the zero symbol

  static SymbolExpr constant(double value);
  static SymbolExpr wavenumber();
  static SymbolExpr imaginary_unit();

  friend SymbolExpr operator+(const SymbolExpr& a, const SymbolExpr& b);
  friend SymbolExpr operator-(const SymbolExpr& a, const SymbolExpr& b);
  friend SymbolExpr operator*(const SymbolExpr& a, const SymbolExpr& b);
  friend SymbolExpr operator/(const SymbolExpr& a, const SymbolExpr& b);
  friend SymbolExpr operator-(const SymbolExpr& a);
  friend SymbolExpr pow(const SymbolExpr& base, double exponent);
  friend SymbolExpr abs(const SymbolExpr& arg);
  friend SymbolExpr sgn(const SymbolExpr& arg);

  // Raw pointwise value; may be non-finite at singular points.
  Complex raw(double k) const;

  // Same tree with k replaced by scale*k.
  SymbolExpr substitute_scaled(double scale) const;

  int depth() const;
  bool is_constant() const;
  std::string to_string() const;

  const Node& root() const { return *root_; }

 private:
  explicit SymbolExpr(std::shared_ptr<const Node> root);
  std::shared_ptr<const Node> root_;
  friend class Parser;
};

SymbolExpr pow(const SymbolExpr& base, double exponent);
SymbolExpr abs(const SymbolExpr& arg);
SymbolExpr sgn(const SymbolExpr& arg);

// Grammar: + - * / ^ with the usual precedence (^ binds tightest and is right
// associative, unary minus binds looser than ^), parentheses, the variable k,
// the constants i and pi, functions abs() and sgn(), decimal literals, and
// any name bound in `params`. Exponents must be constant; non-integer
// exponents require a base that is provably nonnegative.
SymbolExpr parse_symbol(std::string_view text, const ParameterMap& params = {});

// Evaluates with the k = 0 convention: a non-finite value at k = 0 is replaced
// by 0 when the symmetrized limit (l(d) + l(-d))/2 vanishes; otherwise
// InvalidArgument is thrown. Non-finite values elsewhere also throw.
Complex eval_symbol(const SymbolExpr& expr, double k);
std::vector<Complex> eval_symbol(const SymbolExpr& expr,
                                 std::span<const double> wavenumbers);

struct AdmissibilityReport {
  bool zero_at_origin = false;
  bool hermitian = false;
  bool dissipative = false;
  double max_re = 0.0;
  bool passed = false;
  std::string detail;
};

inline constexpr double kSymbolTolerance = 1e-12;

// `samples` must be symmetric about 0 and contain 0.
AdmissibilityReport validate_admissibility(const SymbolExpr& expr,
                                           std::span<const double> samples);

// Symmetric sample set: the given wavenumbers, their negatives, 0, and a
// geometric refinement towards 0 below the smallest nonzero |k|.
std::vector<double> admissibility_samples(std::span<const double> wavenumbers);

// Samples for a 4096-point grid on a box of length 400 (|k| up to ~32).
std::vector<double> default_admissibility_samples();

struct MultiplierSpec {
  SymbolExpr expr;
  std::string label;
  AdmissibilityReport admissibility;

  bool admissible() const { return admissibility.passed; }
};

// Validates on `samples` (default_admissibility_samples() when empty).
MultiplierSpec make_spec(SymbolExpr expr, std::string label,
                         std::span<const double> samples = {});

struct FracTerm {
  double a = 0.0;
  double alpha = 0.0;

  bool operator==(const FracTerm&) const = default;
};

struct PresetParams {
  double nu = 0.0;
  std::vector<FracTerm> frac;
};

// name in {burgers, kdvb, bo, hilbert, frac}.
MultiplierSpec preset(std::string_view name, const PresetParams& params = {});
MultiplierSpec burgers();
MultiplierSpec kdvb(double nu);
MultiplierSpec benjamin_ono();
MultiplierSpec hilbert();
MultiplierSpec fractional(const std::vector<FracTerm>& terms);

// DSL text equivalent to a preset, e.g. "-0.1*(i*k)^3".
std::string preset_text(std::string_view name, const PresetParams& params = {});

// l1(k) = lambda^-2 l(lambda k); admissibility is re-validated.
MultiplierSpec rescale_symbol(const MultiplierSpec& spec, double lambda);

}  // namespace frontlab::symbol

#endif  // FRONTLAB_SYMBOL_HPP_
