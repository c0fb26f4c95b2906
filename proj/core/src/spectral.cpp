#include "frontlab/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "frontlab/error.hpp"

namespace frontlab::spectral {

namespace {

bool is_power_of_two(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }

// FFTW plans per size. Planning is not thread-safe and goes through the
// registry mutex; new-array execution on distinct buffers is.
struct Plans {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
  fftw_plan c2c_forward = nullptr;
  fftw_plan c2c_backward = nullptr;
};

class PlanRegistry {
 public:
  static const Plans& get(std::size_t n) {
    static PlanRegistry registry;
    std::lock_guard<std::mutex> lock(registry.mutex_);
    auto it = registry.plans_.find(n);
    if (it != registry.plans_.end()) return *it->second;
    auto plans = std::make_unique<Plans>();
    const int ni = static_cast<int>(n);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    double* real_buf = fftw_alloc_real(n);
    fftw_complex* half_buf = fftw_alloc_complex(n / 2 + 1);
    fftw_complex* a = fftw_alloc_complex(n);
    fftw_complex* b = fftw_alloc_complex(n);
    plans->r2c = fftw_plan_dft_r2c_1d(ni, real_buf, half_buf, flags);
    plans->c2r = fftw_plan_dft_c2r_1d(ni, half_buf, real_buf, flags);
    plans->c2c_forward = fftw_plan_dft_1d(ni, a, b, FFTW_FORWARD, flags);
    plans->c2c_backward = fftw_plan_dft_1d(ni, a, b, FFTW_BACKWARD, flags);
    fftw_free(real_buf);
    fftw_free(half_buf);
    fftw_free(a);
    fftw_free(b);
    const Plans& ref = *plans;
    registry.plans_.emplace(n, std::move(plans));
    return ref;
  }

 private:
  std::mutex mutex_;
  std::map<std::size_t, std::unique_ptr<Plans>> plans_;
};

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

void require_same_grid(const Field& a, const Field& b) {
  if (!(a.grid == b.grid)) throw InvalidArgument("fields live on different grids");
}

std::vector<Complex> full_forward(const Field& f) {
  const std::size_t n = f.size();
  std::vector<Complex> in(n), out(n);
  for (std::size_t j = 0; j < n; ++j) in[j] = f.values[j];
  fftw_execute_dft(PlanRegistry::get(n).c2c_forward, as_fftw(in.data()), as_fftw(out.data()));
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Grid and Field

Grid::Grid(std::size_t n, double length) : n_(n), length_(length) {
  if (!is_power_of_two(n)) throw InvalidArgument("grid size must be a power of two");
  if (!(length > 0.0) || !std::isfinite(length)) throw InvalidArgument("grid length must be > 0");
}

Grid make_grid(std::size_t n, double length) {
  if (n < 16) throw InvalidArgument("simulation grids need N >= 16");
  return Grid(n, length);
}

std::vector<double> Grid::points() const {
  std::vector<double> xs(n_);
  for (std::size_t j = 0; j < n_; ++j) xs[j] = x(j);
  return xs;
}

double Grid::wavenumber(long m) const {
  return 2.0 * std::numbers::pi * static_cast<double>(m) / length_;
}

double Grid::max_wavenumber() const { return std::numbers::pi * static_cast<double>(n_) / length_; }

std::vector<double> Grid::centered_wavenumbers() const {
  std::vector<double> k(n_);
  const long half = static_cast<long>(n_ / 2);
  for (long m = -half; m < half; ++m) k[static_cast<std::size_t>(m + half)] = wavenumber(m);
  return k;
}

std::vector<double> Grid::half_wavenumbers() const {
  std::vector<double> k(half_size());
  for (std::size_t j = 0; j < k.size(); ++j) k[j] = wavenumber(static_cast<long>(j));
  return k;
}

Field::Field(Grid g) : grid(g), values(g.size(), 0.0) {}

Field::Field(Grid g, std::vector<double> v) : grid(g), values(std::move(v)) {
  if (values.size() != grid.size()) throw InvalidArgument("field length does not match its grid");
}

bool Field::all_finite() const {
  return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

Field& Field::operator+=(const Field& other) {
  require_same_grid(*this, other);
  for (std::size_t j = 0; j < values.size(); ++j) values[j] += other.values[j];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  require_same_grid(*this, other);
  for (std::size_t j = 0; j < values.size(); ++j) values[j] -= other.values[j];
  return *this;
}

Field& Field::operator*=(double s) {
  for (double& v : values) v *= s;
  return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double s, Field a) { return a *= s; }

// ---------------------------------------------------------------------------
// Transforms

Spectrum forward(const Field& f) {
  const std::size_t n = f.size();
  std::vector<double> in = f.values;
  Spectrum out(n / 2 + 1);
  fftw_execute_dft_r2c(PlanRegistry::get(n).r2c, in.data(), as_fftw(out.data()));
  return out;
}

Field inverse(const Grid& g, Spectrum s) {
  const std::size_t n = g.size();
  if (s.size() != g.half_size()) throw InvalidArgument("spectrum length does not match grid");
  std::vector<double> out(n);
  fftw_execute_dft_c2r(PlanRegistry::get(n).c2r, as_fftw(s.data()), out.data());
  const double scale = 1.0 / static_cast<double>(n);
  for (double& v : out) v *= scale;
  return Field(g, std::move(out));
}

Multiplier::Multiplier(const Grid& g, const symbol::SymbolExpr& expr)
    : grid_(g), values_(symbol::eval_symbol(expr, g.half_wavenumbers())) {
  values_.back() = Complex(values_.back().real(), 0.0);
}

Multiplier::Multiplier(const Grid& g, std::vector<Complex> half_values)
    : grid_(g), values_(std::move(half_values)) {
  if (values_.size() != g.half_size()) throw InvalidArgument("multiplier length does not match grid");
  values_.back() = Complex(values_.back().real(), 0.0);
}

void Multiplier::apply_in_place(Spectrum& s) const {
  for (std::size_t j = 0; j < s.size(); ++j) s[j] *= values_[j];
}

Field Multiplier::apply(const Field& f) const {
  if (!(f.grid == grid_)) throw InvalidArgument("multiplier and field grids differ");
  Spectrum s = forward(f);
  apply_in_place(s);
  return inverse(grid_, std::move(s));
}

Field apply_multiplier(const Field& f, std::span<const Complex> symbol_values) {
  const std::size_t n = f.size();
  if (symbol_values.size() != n) {
    throw InvalidArgument("symbol needs one value per wavenumber (N values, m = -N/2..N/2-1)");
  }
  std::vector<Complex> s = full_forward(f);
  double max_symbol = 1.0;
  const long half = static_cast<long>(n / 2);
  for (std::size_t j = 0; j < n; ++j) {
    const long m = j < n / 2 ? static_cast<long>(j) : static_cast<long>(j) - static_cast<long>(n);
    Complex l = symbol_values[static_cast<std::size_t>(m + half)];
    if (m == -half) l = Complex(l.real(), 0.0);
    max_symbol = std::max(max_symbol, std::abs(l));
    s[j] *= l;
  }
  std::vector<Complex> out(n);
  fftw_execute_dft(PlanRegistry::get(n).c2c_backward, as_fftw(s.data()), as_fftw(out.data()));

  Field result(f.grid);
  double imag_sq = 0.0;
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) {
    result.values[j] = out[j].real() * scale;
    const double im = out[j].imag() * scale;
    imag_sq += im * im;
  }
  const double h = f.grid.spacing();
  const double imag_norm = std::sqrt(h * imag_sq);
  if (imag_norm > 1e-12 * max_symbol * lp_norm(f, 2.0)) {
    throw InvalidArgument("non-Hermitian symbol: imaginary residue " + std::to_string(imag_norm));
  }
  return result;
}

Field apply_multiplier(const Field& f, const symbol::SymbolExpr& expr) {
  const auto values = symbol::eval_symbol(expr, f.grid.centered_wavenumbers());
  return apply_multiplier(f, values);
}

Field derivative(const Field& f, int order) {
  if (order < 1 || order > 3) throw InvalidArgument("derivative order must be 1, 2 or 3");
  const auto k = f.grid.half_wavenumbers();
  Spectrum s = forward(f);
  for (std::size_t j = 0; j < s.size(); ++j) {
    Complex ik(0.0, k[j]);
    Complex factor = ik;
    for (int p = 1; p < order; ++p) factor *= ik;
    s[j] *= factor;
  }
  // Odd derivatives have a purely imaginary Nyquist symbol; drop it.
  if (order % 2 == 1) s.back() = 0.0;
  return inverse(f.grid, std::move(s));
}

// ---------------------------------------------------------------------------
// Norms

double lp_norm(const Field& f, double p) {
  if (!(p >= 1.0)) throw InvalidArgument("lp_norm requires p >= 1");
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : f.values) m = std::max(m, std::abs(v));
    return m;
  }
  const double h = f.grid.spacing();
  double sum = 0.0;
  if (p == 1.0) {
    for (double v : f.values) sum += std::abs(v);
    return h * sum;
  }
  if (p == 2.0) {
    for (double v : f.values) sum += v * v;
    return std::sqrt(h * sum);
  }
  // Scale by the max to stay clear of under/overflow for large p.
  double m = 0.0;
  for (double v : f.values) m = std::max(m, std::abs(v));
  if (m == 0.0) return 0.0;
  for (double v : f.values) sum += std::pow(std::abs(v) / m, p);
  return m * std::pow(h * sum, 1.0 / p);
}

double weighted_l2(const Field& f, double center) {
  if (!(std::abs(center) < 0.5 * f.grid.length())) {
    throw InvalidArgument("weighted_l2 center must lie inside the box");
  }
  const double h = f.grid.spacing();
  double sum = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) {
    sum += f.values[j] * f.values[j] * std::abs(f.grid.x(j) - center);
  }
  return std::sqrt(h * sum);
}

double inner(const Field& f, const Field& g) {
  require_same_grid(f, g);
  double sum = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) sum += f.values[j] * g.values[j];
  return f.grid.spacing() * sum;
}

// ---------------------------------------------------------------------------
// Band projections and dealiasing

namespace {

bool in_band(const Grid& g, std::size_t j, double eps_freq) {
  return static_cast<double>(j) / g.length() < eps_freq;
}

}  // namespace

std::pair<Field, Field> band_project(const Field& f, double eps_freq) {
  if (!(eps_freq > 0.0)) throw InvalidArgument("band_project requires eps_freq > 0");
  Spectrum s = forward(f);
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (!in_band(f.grid, j, eps_freq)) s[j] = 0.0;
  }
  Field low = inverse(f.grid, std::move(s));
  Field high = f - low;
  return {std::move(low), std::move(high)};
}

double band_measure(const Grid& g, double eps_freq) {
  std::size_t count = 0;
  const std::size_t n = g.size();
  for (std::size_t j = 0; j <= n / 2; ++j) {
    if (!in_band(g, j, eps_freq)) continue;
    // Modes +j and -j, except j = 0 and the (single) Nyquist mode.
    count += (j == 0 || j == n / 2) ? 1 : 2;
  }
  return static_cast<double>(count) / g.length();
}

void dealias(Spectrum& s) {
  const std::size_t n = 2 * (s.size() - 1);
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (3 * j > n) s[j] = 0.0;
  }
}

Spectrum dealiased(Spectrum s) {
  dealias(s);
  return s;
}

// ---------------------------------------------------------------------------
// Semigroup kernels

Field kernel_field(const Grid& g, const std::function<Complex(double)>& multiplier_of_k) {
  const auto k = g.half_wavenumbers();
  Spectrum s(k.size());
  const double scale = static_cast<double>(g.size()) / g.length();
  for (std::size_t j = 0; j < k.size(); ++j) {
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;  // e^{i k_m L/2} = (-1)^m
    s[j] = scale * sign * multiplier_of_k(k[j]);
  }
  s.back() = Complex(s.back().real(), 0.0);
  return inverse(g, std::move(s));
}

namespace {

KernelReport summarize_kernel(const Field& p) {
  KernelReport r;
  r.min_value = *std::min_element(p.values.begin(), p.values.end());
  r.max_value = *std::max_element(p.values.begin(), p.values.end());
  double sum = 0.0;
  for (double v : p.values) sum += v;
  r.integral = p.grid.spacing() * sum;
  r.positive = r.min_value >= -1e-10 * r.max_value;
  return r;
}

}  // namespace

KernelReport kernel_positivity_check(const Grid& g, const symbol::SymbolExpr& expr, double t) {
  if (!(t > 0.0)) throw InvalidArgument("kernel time must be positive");
  return summarize_kernel(
      kernel_field(g, [&](double k) { return std::exp(t * symbol::eval_symbol(expr, k)); }));
}

KernelReport kernel_positivity_check(const Grid& g, double alpha, double t) {
  if (!(t > 0.0)) throw InvalidArgument("kernel time must be positive");
  if (!(alpha > 0.0)) throw InvalidArgument("kernel exponent alpha must be positive");
  return summarize_kernel(kernel_field(g, [&](double k) {
    return Complex(std::exp(-t * std::pow(std::abs(k), 2.0 * alpha)), 0.0);
  }));
}

// ---------------------------------------------------------------------------
// Interpolation and shifts

Interpolator::Interpolator(const Field& f, std::size_t oversample) : grid_(f.grid) {
  if (!is_power_of_two(oversample)) throw InvalidArgument("oversample factor must be a power of two");
  const std::size_t n = f.size();
  const std::size_t m = n * oversample;
  Spectrum coarse = forward(f);
  Spectrum fine(m / 2 + 1, Complex(0.0, 0.0));
  const double scale = static_cast<double>(oversample);
  for (std::size_t j = 0; j < n / 2; ++j) fine[j] = scale * coarse[j];
  fine[n / 2] = 0.5 * scale * Complex(coarse[n / 2].real(), 0.0);
  Field dense = inverse(Grid(m, f.grid.length()), std::move(fine));
  fine_ = std::move(dense.values);
  fine_h_ = f.grid.length() / static_cast<double>(m);
}

double Interpolator::operator()(double x) const {
  constexpr int kStencil = 10;
  constexpr double kWeights[kStencil] = {1, -9, 36, -84, 126, -126, 84, -36, 9, -1};
  const long m = static_cast<long>(fine_.size());
  double t = (x + 0.5 * grid_.length()) / fine_h_;
  t = std::fmod(t, static_cast<double>(m));
  if (t < 0) t += static_cast<double>(m);
  const long i0 = static_cast<long>(std::floor(t)) - kStencil / 2 + 1;
  double num = 0.0;
  double den = 0.0;
  for (int i = 0; i < kStencil; ++i) {
    const long node = i0 + i;
    const double d = t - static_cast<double>(node);
    const long wrapped = ((node % m) + m) % m;
    if (d == 0.0) return fine_[static_cast<std::size_t>(wrapped)];
    const double w = kWeights[i] / d;
    num += w * fine_[static_cast<std::size_t>(wrapped)];
    den += w;
  }
  return num / den;
}

std::vector<double> Interpolator::operator()(std::span<const double> xs) const {
  std::vector<double> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = (*this)(xs[i]);
  return out;
}

Field shift(const Field& f, double s) {
  const auto k = f.grid.half_wavenumbers();
  Spectrum spec = forward(f);
  for (std::size_t j = 0; j + 1 < spec.size(); ++j) spec[j] *= std::polar(1.0, k[j] * s);
  spec.back() *= std::cos(k.back() * s);
  spec.back() = Complex(spec.back().real(), 0.0);
  return inverse(f.grid, std::move(spec));
}

}  // namespace frontlab::spectral
