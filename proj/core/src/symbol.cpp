#include "frontlab/symbol.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

#include "frontlab/error.hpp"

namespace frontlab::symbol {

enum class Kind { kConstant, kWavenumber, kImagUnit, kAdd, kSub, kMul, kDiv, kNeg, kPow, kAbs, kSgn };

struct Node {
  Kind kind = Kind::kConstant;
  double value = 0.0;  // literal value, or the exponent of kPow
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

namespace {

using NodePtr = std::shared_ptr<const Node>;

NodePtr make_node(Kind kind, NodePtr lhs = nullptr, NodePtr rhs = nullptr, double value = 0.0) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  n->value = value;
  return n;
}

bool is_integer(double x) { return std::isfinite(x) && x == std::round(x); }

Complex int_pow(Complex base, long long n) {
  if (n < 0) return Complex(1.0, 0.0) / int_pow(base, -n);
  Complex result(1.0, 0.0);
  while (n > 0) {
    if (n & 1) result *= base;
    base *= base;
    n >>= 1;
  }
  return result;
}

Complex evaluate(const Node& n, double k) {
  switch (n.kind) {
    case Kind::kConstant:
      return {n.value, 0.0};
    case Kind::kWavenumber:
      return {k, 0.0};
    case Kind::kImagUnit:
      return {0.0, 1.0};
    case Kind::kAdd:
      return evaluate(*n.lhs, k) + evaluate(*n.rhs, k);
    case Kind::kSub:
      return evaluate(*n.lhs, k) - evaluate(*n.rhs, k);
    case Kind::kMul:
      return evaluate(*n.lhs, k) * evaluate(*n.rhs, k);
    case Kind::kDiv: {
      const Complex den = evaluate(*n.rhs, k);
      if (den == Complex(0.0, 0.0)) {
        return {std::numeric_limits<double>::infinity(), 0.0};
      }
      return evaluate(*n.lhs, k) / den;
    }
    case Kind::kNeg:
      return -evaluate(*n.lhs, k);
    case Kind::kPow: {
      const Complex base = evaluate(*n.lhs, k);
      if (is_integer(n.value) && std::abs(n.value) < 1e9) {
        if (base == Complex(0.0, 0.0) && n.value < 0) {
          return {std::numeric_limits<double>::infinity(), 0.0};
        }
        return int_pow(base, static_cast<long long>(n.value));
      }
      if (base.imag() == 0.0 && base.real() >= 0.0) {
        return {std::pow(base.real(), n.value), 0.0};
      }
      return std::pow(base, n.value);
    }
    case Kind::kAbs:
      return {std::abs(evaluate(*n.lhs, k)), 0.0};
    case Kind::kSgn: {
      const double re = evaluate(*n.lhs, k).real();
      return {static_cast<double>((re > 0.0) - (re < 0.0)), 0.0};
    }
  }
  return {0.0, 0.0};
}

bool depends_on_k(const Node& n) {
  if (n.kind == Kind::kWavenumber) return true;
  if (n.lhs && depends_on_k(*n.lhs)) return true;
  if (n.rhs && depends_on_k(*n.rhs)) return true;
  return false;
}

bool is_real(const Node& n) {
  switch (n.kind) {
    case Kind::kConstant:
    case Kind::kWavenumber:
    case Kind::kAbs:
    case Kind::kSgn:
      return true;
    case Kind::kImagUnit:
      return false;
    case Kind::kAdd:
    case Kind::kSub:
    case Kind::kMul:
    case Kind::kDiv:
      return is_real(*n.lhs) && is_real(*n.rhs);
    case Kind::kNeg:
      return is_real(*n.lhs);
    case Kind::kPow:
      return is_real(*n.lhs);
  }
  return false;
}

bool is_nonnegative(const Node& n) {
  switch (n.kind) {
    case Kind::kConstant:
      return n.value >= 0.0;
    case Kind::kAbs:
      return true;
    case Kind::kAdd:
    case Kind::kMul:
    case Kind::kDiv:
      return is_nonnegative(*n.lhs) && is_nonnegative(*n.rhs);
    case Kind::kPow:
      if (is_nonnegative(*n.lhs)) return true;
      return is_real(*n.lhs) && is_integer(n.value) && std::fmod(n.value, 2.0) == 0.0;
    default:
      return false;
  }
}

int depth_of(const Node& n) {
  int d = 0;
  if (n.lhs) d = std::max(d, depth_of(*n.lhs));
  if (n.rhs) d = std::max(d, depth_of(*n.rhs));
  return d + 1;
}

NodePtr scaled_copy(const NodePtr& n, double scale) {
  if (n->kind == Kind::kWavenumber) {
    return make_node(Kind::kMul, make_node(Kind::kConstant, nullptr, nullptr, scale), n);
  }
  if (!n->lhs && !n->rhs) return n;
  return make_node(n->kind, n->lhs ? scaled_copy(n->lhs, scale) : nullptr,
                   n->rhs ? scaled_copy(n->rhs, scale) : nullptr, n->value);
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  // Shortest representation that still round-trips.
  for (int prec = 1; prec <= 17; ++prec) {
    char shorter[40];
    std::snprintf(shorter, sizeof shorter, "%.*g", prec, v);
    if (std::strtod(shorter, nullptr) == v) return shorter;
  }
  return buf;
}

int precedence(const Node& n) {
  switch (n.kind) {
    case Kind::kAdd:
    case Kind::kSub:
      return 1;
    case Kind::kMul:
    case Kind::kDiv:
      return 2;
    case Kind::kNeg:
      return 3;
    case Kind::kPow:
      return 4;
    case Kind::kConstant:
      return n.value < 0.0 ? 3 : 5;
    default:
      return 5;
  }
}

void print(const Node& n, std::ostream& os);

void print_operand(const Node& n, int min_prec, std::ostream& os) {
  if (precedence(n) < min_prec) {
    os << '(';
    print(n, os);
    os << ')';
  } else {
    print(n, os);
  }
}

void print(const Node& n, std::ostream& os) {
  switch (n.kind) {
    case Kind::kConstant:
      os << format_number(n.value);
      return;
    case Kind::kWavenumber:
      os << 'k';
      return;
    case Kind::kImagUnit:
      os << 'i';
      return;
    case Kind::kAdd:
      print_operand(*n.lhs, 1, os);
      os << " + ";
      print_operand(*n.rhs, 2, os);
      return;
    case Kind::kSub:
      print_operand(*n.lhs, 1, os);
      os << " - ";
      print_operand(*n.rhs, 2, os);
      return;
    case Kind::kMul:
      print_operand(*n.lhs, 2, os);
      os << '*';
      print_operand(*n.rhs, 3, os);
      return;
    case Kind::kDiv:
      print_operand(*n.lhs, 2, os);
      os << '/';
      print_operand(*n.rhs, 4, os);
      return;
    case Kind::kNeg:
      os << '-';
      print_operand(*n.lhs, 4, os);
      return;
    case Kind::kPow:
      print_operand(*n.lhs, 5, os);
      os << '^';
      if (n.value < 0.0) {
        os << '(' << format_number(n.value) << ')';
      } else {
        os << format_number(n.value);
      }
      return;
    case Kind::kAbs:
      os << "abs(";
      print(*n.lhs, os);
      os << ')';
      return;
    case Kind::kSgn:
      os << "sgn(";
      print(*n.lhs, os);
      os << ')';
      return;
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// SymbolExpr

SymbolExpr::SymbolExpr() : root_(make_node(Kind::kConstant)) {}
SymbolExpr::SymbolExpr(std::shared_ptr<const Node> root) : root_(std::move(root)) {}

SymbolExpr SymbolExpr::constant(double value) {
  if (!std::isfinite(value)) throw InvalidArgument("symbol constants must be finite");
  return SymbolExpr(make_node(Kind::kConstant, nullptr, nullptr, value));
}
SymbolExpr SymbolExpr::wavenumber() { return SymbolExpr(make_node(Kind::kWavenumber)); }
SymbolExpr SymbolExpr::imaginary_unit() { return SymbolExpr(make_node(Kind::kImagUnit)); }

SymbolExpr operator+(const SymbolExpr& a, const SymbolExpr& b) {
  return SymbolExpr(make_node(Kind::kAdd, a.root_, b.root_));
}
SymbolExpr operator-(const SymbolExpr& a, const SymbolExpr& b) {
  return SymbolExpr(make_node(Kind::kSub, a.root_, b.root_));
}
SymbolExpr operator*(const SymbolExpr& a, const SymbolExpr& b) {
  return SymbolExpr(make_node(Kind::kMul, a.root_, b.root_));
}
SymbolExpr operator/(const SymbolExpr& a, const SymbolExpr& b) {
  return SymbolExpr(make_node(Kind::kDiv, a.root_, b.root_));
}
SymbolExpr operator-(const SymbolExpr& a) { return SymbolExpr(make_node(Kind::kNeg, a.root_)); }
SymbolExpr pow(const SymbolExpr& base, double exponent) {
  if (!std::isfinite(exponent)) throw InvalidArgument("exponent must be finite");
  if (!is_integer(exponent) && !is_nonnegative(*base.root_)) {
    throw InvalidArgument("non-integer exponent on sign-changing base");
  }
  return SymbolExpr(make_node(Kind::kPow, base.root_, nullptr, exponent));
}
SymbolExpr abs(const SymbolExpr& arg) { return SymbolExpr(make_node(Kind::kAbs, arg.root_)); }
SymbolExpr sgn(const SymbolExpr& arg) { return SymbolExpr(make_node(Kind::kSgn, arg.root_)); }

Complex SymbolExpr::raw(double k) const { return evaluate(*root_, k); }

SymbolExpr SymbolExpr::substitute_scaled(double scale) const {
  return SymbolExpr(scaled_copy(root_, scale));
}

int SymbolExpr::depth() const { return depth_of(*root_); }
bool SymbolExpr::is_constant() const { return !depends_on_k(*root_); }

std::string SymbolExpr::to_string() const {
  std::ostringstream os;
  print(*root_, os);
  return os.str();
}

// ---------------------------------------------------------------------------
// Parser

class Parser {
 public:
  Parser(std::string_view text, const ParameterMap& params) : text_(text), params_(params) {}

  SymbolExpr parse() {
    if (text_.empty()) throw ParseError("empty symbol expression", 0);
    for (std::size_t i = 0; i < text_.size(); ++i) {
      if (static_cast<unsigned char>(text_[i]) > 127) {
        throw ParseError("non-ASCII character", i);
      }
    }
    skip_space();
    if (pos_ == text_.size()) throw ParseError("empty symbol expression", pos_);
    NodePtr root = parse_expr();
    skip_space();
    if (pos_ != text_.size()) {
      throw ParseError(std::string("unexpected character '") + text_[pos_] + "'", pos_);
    }
    return SymbolExpr(root);
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  [[noreturn]] void unexpected() {
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
    throw ParseError(std::string("unexpected token '") + text_[pos_] + "'", pos_);
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = make_node(Kind::kAdd, lhs, parse_term());
      } else if (accept('-')) {
        lhs = make_node(Kind::kSub, lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = make_node(Kind::kMul, lhs, parse_unary());
      } else if (accept('/')) {
        lhs = make_node(Kind::kDiv, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_unary() {
    if (accept('-')) return make_node(Kind::kNeg, parse_unary());
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_primary();
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == '^') {
      const std::size_t caret = pos_;
      ++pos_;
      const std::size_t exponent_start = (skip_space(), pos_);
      NodePtr exponent = parse_unary();
      if (depends_on_k(*exponent)) {
        throw ParseError("exponent must not depend on k", exponent_start);
      }
      const Complex e = evaluate(*exponent, 0.0);
      if (e.imag() != 0.0 || !std::isfinite(e.real())) {
        throw ParseError("exponent must be a finite real constant", exponent_start);
      }
      if (!is_integer(e.real()) && !is_nonnegative(*base)) {
        throw ParseError("non-integer exponent on sign-changing base", caret);
      }
      return make_node(Kind::kPow, base, nullptr, e.real());
    }
    return base;
  }

  NodePtr parse_primary() {
    skip_space();
    if (pos_ >= text_.size()) unexpected();
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = parse_expr();
      if (!accept(')')) unexpected();
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    unexpected();
  }

  NodePtr parse_number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
      ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
      if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look]))) {
        pos_ = look;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      }
    }
    const std::string literal(text_.substr(start, pos_ - start));
    char* end = nullptr;
    const double v = std::strtod(literal.c_str(), &end);
    if (end != literal.c_str() + literal.size() || !std::isfinite(v)) {
      throw ParseError("malformed number '" + literal + "'", start);
    }
    return make_node(Kind::kConstant, nullptr, nullptr, v);
  }

  NodePtr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view name = text_.substr(start, pos_ - start);
    if (name == "k") return make_node(Kind::kWavenumber);
    if (name == "i") return make_node(Kind::kImagUnit);
    if (name == "pi") return make_node(Kind::kConstant, nullptr, nullptr, std::numbers::pi);
    if (name == "abs" || name == "sgn") {
      if (!accept('(')) unexpected();
      NodePtr arg = parse_expr();
      if (!accept(')')) unexpected();
      return make_node(name == "abs" ? Kind::kAbs : Kind::kSgn, arg);
    }
    if (auto it = params_.find(name); it != params_.end()) {
      if (!std::isfinite(it->second)) {
        throw ParseError("parameter '" + std::string(name) + "' is not finite", start);
      }
      return make_node(Kind::kConstant, nullptr, nullptr, it->second);
    }
    throw ParseError("unknown identifier '" + std::string(name) + "'", start);
  }

  std::string_view text_;
  const ParameterMap& params_;
  std::size_t pos_ = 0;
};

SymbolExpr parse_symbol(std::string_view text, const ParameterMap& params) {
  return Parser(text, params).parse();
}

// ---------------------------------------------------------------------------
// Evaluation

Complex eval_symbol(const SymbolExpr& expr, double k) {
  if (!std::isfinite(k)) throw InvalidArgument("wavenumber must be finite");
  const Complex v = expr.raw(k);
  if (std::isfinite(v.real()) && std::isfinite(v.imag())) return v;
  if (k != 0.0) {
    throw InvalidArgument("symbol " + expr.to_string() + " is singular at k=" + std::to_string(k));
  }
  constexpr double kProbe = 1e-8;
  const Complex avg = 0.5 * (expr.raw(kProbe) + expr.raw(-kProbe));
  if (std::isfinite(avg.real()) && std::isfinite(avg.imag()) && std::abs(avg) <= 1e-6) {
    return {0.0, 0.0};
  }
  throw InvalidArgument("symbol " + expr.to_string() +
                        " is singular at k=0 and its symmetrized limit is not 0");
}

std::vector<Complex> eval_symbol(const SymbolExpr& expr, std::span<const double> wavenumbers) {
  std::vector<Complex> out;
  out.reserve(wavenumbers.size());
  for (double k : wavenumbers) out.push_back(eval_symbol(expr, k));
  return out;
}

AdmissibilityReport validate_admissibility(const SymbolExpr& expr,
                                           std::span<const double> samples) {
  AdmissibilityReport report;
  std::ostringstream detail;
  const double tol = kSymbolTolerance;

  try {
    report.zero_at_origin = std::abs(eval_symbol(expr, 0.0)) <= tol;
    if (!report.zero_at_origin) detail << "l(0) != 0; ";
  } catch (const InvalidArgument& e) {
    report.zero_at_origin = false;
    detail << e.what() << "; ";
  }

  report.hermitian = true;
  report.dissipative = true;
  report.max_re = -std::numeric_limits<double>::infinity();
  for (double k : samples) {
    Complex lk;
    Complex lmk;
    try {
      lk = eval_symbol(expr, k);
      lmk = eval_symbol(expr, -k);
    } catch (const InvalidArgument& e) {
      report.hermitian = false;
      report.dissipative = false;
      detail << e.what() << "; ";
      break;
    }
    const double scale = 1.0 + std::max(std::abs(lk), std::abs(lmk));
    if (std::abs(lmk - std::conj(lk)) > tol * scale && report.hermitian) {
      report.hermitian = false;
      detail << "l(-k) != conj(l(k)) at k=" << k << "; ";
    }
    report.max_re = std::max(report.max_re, lk.real());
    if (lk.real() > tol * (1.0 + std::abs(lk)) && report.dissipative) {
      report.dissipative = false;
      detail << "Re l(k) > 0 at k=" << k << "; ";
    }
  }
  if (samples.empty()) report.max_re = 0.0;
  report.passed = report.zero_at_origin && report.hermitian && report.dissipative;
  report.detail = detail.str();
  return report;
}

std::vector<double> admissibility_samples(std::span<const double> wavenumbers) {
  std::set<double> magnitudes;
  for (double k : wavenumbers) {
    if (!std::isfinite(k)) throw InvalidArgument("sample wavenumbers must be finite");
    if (k != 0.0) magnitudes.insert(std::abs(k));
  }
  if (!magnitudes.empty()) {
    const double kmin = *magnitudes.begin();
    for (int j = 1; j <= 30; ++j) magnitudes.insert(std::ldexp(kmin, -j));
  }
  std::vector<double> out;
  out.reserve(2 * magnitudes.size() + 1);
  for (auto it = magnitudes.rbegin(); it != magnitudes.rend(); ++it) out.push_back(-*it);
  out.push_back(0.0);
  for (double m : magnitudes) out.push_back(m);
  return out;
}

std::vector<double> default_admissibility_samples() {
  constexpr int n = 4096;
  constexpr double length = 400.0;
  std::vector<double> k;
  k.reserve(n);
  for (int m = -n / 2; m < n / 2; ++m) k.push_back(2.0 * std::numbers::pi * m / length);
  return admissibility_samples(k);
}

MultiplierSpec make_spec(SymbolExpr expr, std::string label, std::span<const double> samples) {
  MultiplierSpec spec;
  spec.expr = std::move(expr);
  spec.label = std::move(label);
  if (samples.empty()) {
    const auto defaults = default_admissibility_samples();
    spec.admissibility = validate_admissibility(spec.expr, defaults);
  } else {
    spec.admissibility = validate_admissibility(spec.expr, samples);
  }
  return spec;
}

// ---------------------------------------------------------------------------
// Presets

namespace {

void check_frac_terms(const std::vector<FracTerm>& terms) {
  if (terms.empty()) throw InvalidArgument("frac preset needs at least one (a, alpha) term");
  double previous = 0.0;
  for (const auto& t : terms) {
    if (!(t.a >= 0.0) || !std::isfinite(t.a)) {
      throw InvalidArgument("frac preset requires a_j >= 0");
    }
    if (!(t.alpha > previous) || !(t.alpha < 1.0)) {
      throw InvalidArgument("frac preset requires 0 < alpha_1 < ... < alpha_N < 1");
    }
    previous = t.alpha;
  }
}

std::string label_for(std::string_view name, const PresetParams& p) {
  std::ostringstream os;
  os << name;
  if (name == "kdvb") os << "(nu=" << format_number(p.nu) << ")";
  if (name == "frac") {
    os << "(";
    for (std::size_t j = 0; j < p.frac.size(); ++j) {
      if (j) os << ";";
      os << format_number(p.frac[j].a) << "," << format_number(p.frac[j].alpha);
    }
    os << ")";
  }
  return os.str();
}

}  // namespace

MultiplierSpec burgers() { return make_spec(SymbolExpr::constant(0.0), "burgers"); }

MultiplierSpec kdvb(double nu) {
  if (!std::isfinite(nu)) throw InvalidArgument("kdvb requires finite nu");
  const auto ik = SymbolExpr::imaginary_unit() * SymbolExpr::wavenumber();
  return make_spec(SymbolExpr::constant(nu) * pow(ik, 3.0), label_for("kdvb", {nu, {}}));
}

MultiplierSpec benjamin_ono() {
  const auto k = SymbolExpr::wavenumber();
  return make_spec(SymbolExpr::imaginary_unit() * k * abs(k), "bo");
}

MultiplierSpec hilbert() {
  return make_spec(SymbolExpr::imaginary_unit() * sgn(SymbolExpr::wavenumber()), "hilbert");
}

MultiplierSpec fractional(const std::vector<FracTerm>& terms) {
  check_frac_terms(terms);
  const auto absk = abs(SymbolExpr::wavenumber());
  SymbolExpr sum = SymbolExpr::constant(terms[0].a) * pow(absk, 2.0 * terms[0].alpha);
  for (std::size_t j = 1; j < terms.size(); ++j) {
    sum = sum + SymbolExpr::constant(terms[j].a) * pow(absk, 2.0 * terms[j].alpha);
  }
  return make_spec(-sum, label_for("frac", {0.0, terms}));
}

MultiplierSpec preset(std::string_view name, const PresetParams& params) {
  if (name == "burgers") return burgers();
  if (name == "kdvb") return kdvb(params.nu);
  if (name == "bo") return benjamin_ono();
  if (name == "hilbert") return hilbert();
  if (name == "frac") return fractional(params.frac);
  throw InvalidArgument("unknown preset '" + std::string(name) + "'");
}

std::string preset_text(std::string_view name, const PresetParams& params) {
  if (name == "burgers") return "0";
  if (name == "kdvb") return format_number(params.nu) + "*(i*k)^3";
  if (name == "bo") return "i*k*abs(k)";
  if (name == "hilbert") return "i*sgn(k)";
  if (name == "frac") {
    check_frac_terms(params.frac);
    std::string out = "-(";
    for (std::size_t j = 0; j < params.frac.size(); ++j) {
      if (j) out += " + ";
      out += format_number(params.frac[j].a) + "*abs(k)^(" +
             format_number(2.0 * params.frac[j].alpha) + ")";
    }
    return out + ")";
  }
  throw InvalidArgument("unknown preset '" + std::string(name) + "'");
}

MultiplierSpec rescale_symbol(const MultiplierSpec& spec, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw InvalidArgument("rescale_symbol requires lambda > 0");
  }
  if (lambda == 1.0) return spec;
  SymbolExpr scaled = SymbolExpr::constant(1.0 / (lambda * lambda)) * spec.expr.substitute_scaled(lambda);
  return make_spec(std::move(scaled), spec.label + "@lambda=" + format_number(lambda));
}

}  // namespace frontlab::symbol
