#ifndef FRONTLAB_SPECTRAL_HPP_
#define FRONTLAB_SPECTRAL_HPP_

// Periodic grid on a large box standing in for the real line, with the
// discrete Fourier calculus used by every solver in the project.
//
// Conventions: x_j = -L/2 + j h, h = L/N; angular wavenumbers k_m = 2 pi m / L
// for m = -N/2 .. N/2-1. Spectra are FFTW half-spectra (N/2+1 entries,
// unnormalized forward transform); index j carries mode m = j, and j = N/2 is
// the Nyquist mode.

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "frontlab/symbol.hpp"

namespace frontlab::spectral {

using Complex = std::complex<double>;
using Spectrum = std::vector<Complex>;

class Grid {
 public:
  Grid(std::size_t n, double length);

  std::size_t size() const { return n_; }
  double length() const { return length_; }
  double spacing() const { return length_ / static_cast<double>(n_); }
  double x(std::size_t j) const { return -0.5 * length_ + static_cast<double>(j) * spacing(); }
  std::vector<double> points() const;

  // 2 pi m / L.
  double wavenumber(long m) const;
  // Largest |k| on the grid (the Nyquist wavenumber pi N / L).
  double max_wavenumber() const;
  // k_m for m = -N/2 .. N/2-1.
  std::vector<double> centered_wavenumbers() const;
  // k_j for the half-spectrum index j = 0 .. N/2.
  std::vector<double> half_wavenumbers() const;
  std::size_t half_size() const { return n_ / 2 + 1; }

  // Index of the reflection x -> -x on the periodic grid (j -> N-j mod N).
  std::size_t mirror(std::size_t j) const { return j == 0 ? 0 : n_ - j; }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t n_;
  double length_;
};

// Simulation grids: N a power of two with N >= 16, L > 0. The Grid
// constructor itself only requires a power of two >= 2.
Grid make_grid(std::size_t n, double length);

struct Field {
  explicit Field(Grid g);
  Field(Grid g, std::vector<double> v);

  template <typename F>
  static Field sample(const Grid& g, F&& f) {
    std::vector<double> v(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) v[j] = f(g.x(j));
    return Field(g, std::move(v));
  }

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t j) const { return values[j]; }
  double& operator[](std::size_t j) { return values[j]; }
  bool all_finite() const;

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double s);

  Grid grid;
  std::vector<double> values;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double s, Field a);

// Forward real-to-complex transform (unnormalized).
Spectrum forward(const Field& f);
// Inverse of forward(), including the 1/N normalization.
Field inverse(const Grid& g, Spectrum s);

// Precomputed multiplier on the half spectrum. The Nyquist entry keeps only
// the real part of the symbol so real fields map to real fields.
class Multiplier {
 public:
  Multiplier(const Grid& g, const symbol::SymbolExpr& expr);
  Multiplier(const Grid& g, std::vector<Complex> half_values);

  const Grid& grid() const { return grid_; }
  std::span<const Complex> values() const { return values_; }
  Field apply(const Field& f) const;
  void apply_in_place(Spectrum& s) const;

 private:
  Grid grid_;
  std::vector<Complex> values_;
};

// Checked path: `symbol_values` holds l(k_m) for m = -N/2 .. N/2-1. The
// transform is done on complex data and the imaginary residue must stay below
// 1e-12 * max(1, max|l|) * ||f||_2, otherwise the symbol is rejected as
// non-Hermitian.
Field apply_multiplier(const Field& f, std::span<const Complex> symbol_values);
Field apply_multiplier(const Field& f, const symbol::SymbolExpr& expr);

// d^order/dx^order for order 1..3 via the symbol (ik)^order.
Field derivative(const Field& f, int order);

// (h sum |f|^p)^(1/p); p = infinity gives max |f_j|.
double lp_norm(const Field& f, double p);
// (h sum f_j^2 |x_j - a|)^(1/2).
double weighted_l2(const Field& f, double center);
// h sum f g.
double inner(const Field& f, const Field& g);

// Splits f into the part with |xi| < eps_freq (xi = k / 2 pi, i.e. |m| / L <
// eps_freq) and the remainder.
std::pair<Field, Field> band_project(const Field& f, double eps_freq);
// Number of retained modes divided by L: the discrete measure of (-eps, eps).
double band_measure(const Grid& g, double eps_freq);

// Zeros every mode with |m| > N/3 in a half spectrum of length N/2+1.
void dealias(Spectrum& s);
Spectrum dealiased(Spectrum s);

struct KernelReport {
  double min_value = 0.0;
  double max_value = 0.0;
  double integral = 0.0;
  bool positive = false;  // min >= -1e-10 * max
};

// Periodized kernel of exp(t l(k)) sampled on the grid, centered at x = 0.
KernelReport kernel_positivity_check(const Grid& g, const symbol::SymbolExpr& expr, double t);
// Kernel of exp(-t (-d_xx)^alpha), symbol exp(-t |k|^(2 alpha)).
KernelReport kernel_positivity_check(const Grid& g, double alpha, double t);
Field kernel_field(const Grid& g, const std::function<Complex(double)>& multiplier_of_k);

// Band-limited interpolation: zero-padded oversampling followed by a local
// high-order Lagrange stencil. Points are wrapped periodically.
class Interpolator {
 public:
  explicit Interpolator(const Field& f, std::size_t oversample = 8);
  double operator()(double x) const;
  std::vector<double> operator()(std::span<const double> xs) const;

 private:
  Grid grid_;
  double fine_h_;
  std::vector<double> fine_;
};

// Shift: returns g(x) = f(x + s) by spectral phase rotation.
Field shift(const Field& f, double s);

}  // namespace frontlab::spectral

#endif  // FRONTLAB_SPECTRAL_HPP_
