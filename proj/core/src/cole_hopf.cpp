#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "frontlab/error.hpp"
#include "frontlab/evolution.hpp"

namespace frontlab::evolution {

namespace {

double log_cosh(double z) {
  const double a = std::abs(z);
  return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}

// y -> integral_0^y u0. u0 = m - d tanh(x/2) + w with w decaying inside the box;
// the primitive of w is a y + P(y) - P(0) (P periodic), frozen outside the box.
class Primitive {
 public:
  explicit Primitive(const spectral::Field& u0) : half_(0.5 * u0.grid.length()), p_(periodic_part(u0)) {
    p0_ = p_(0.0);
  }

  double operator()(double y) const {
    const double yc = std::clamp(y, -half_, half_);
    return m_ * y - 2.0 * d_ * log_cosh(0.5 * y) + a_ * yc + p_(yc) - p0_;
  }

  double max_abs_u() const { return umax_; }

 private:
  spectral::Interpolator periodic_part(const spectral::Field& u0) {
    const auto& g = u0.grid;
    const std::size_t n = g.size();
    const double left = u0[1], right = u0[n - 1];
    m_ = 0.5 * (left + right);
    d_ = 0.5 * (left - right);
    spectral::Field w(g);
    umax_ = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      w[j] = u0[j] - (m_ - d_ * std::tanh(0.5 * g.x(j)));
      umax_ = std::max(umax_, std::abs(u0[j]));
    }
    auto hat = spectral::forward(w);
    a_ = hat[0].real() / static_cast<double>(n);
    const auto k = g.half_wavenumbers();
    hat[0] = 0.0;
    for (std::size_t j = 1; j + 1 < hat.size(); ++j) hat[j] /= spectral::Complex(0.0, k[j]);
    hat.back() = 0.0;
    return spectral::Interpolator(spectral::inverse(g, std::move(hat)));
  }

  double half_;
  double m_ = 0.0, d_ = 0.0, a_ = 0.0, umax_ = 0.0;
  spectral::Interpolator p_;
  double p0_ = 0.0;
};

}  // namespace

std::vector<double> cole_hopf_exact(const spectral::Field& u0, double t, std::span<const double> xs) {
  if (!(t > 0.0)) throw InvalidArgument("Cole-Hopf time must be positive");
  if (!u0.all_finite()) throw InvalidArgument("initial data is not finite");
  const Primitive prim(u0);
  const double umax = prim.max_abs_u();
  // Integrand e^{-H/2}, H = F(y) + (x-y)^2/(2t); cut where it drops below 1e-18 of the peak.
  const double cut = std::log(1e18);
  const double reach = 2.0 * t * umax + std::sqrt(4.0 * t * (cut + 10.0)) + 1.0;
  const double dy = std::min(0.05, std::sqrt(t) / 8.0);
  using Quad = boost::math::quadrature::gauss_kronrod<double, 31>;

  std::vector<double> out;
  out.reserve(xs.size());
  for (double x : xs) {
    auto expo = [&](double y) { return -0.5 * (prim(y) + (x - y) * (x - y) / (2.0 * t)); };
    const auto samples = static_cast<std::size_t>(std::ceil(2.0 * reach / dy));
    std::vector<double> e(samples + 1);
    double emax = -std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (std::size_t i = 0; i <= samples; ++i) {
      e[i] = expo(x - reach + static_cast<double>(i) * dy);
      if (e[i] > emax) {
        emax = e[i];
        arg = i;
      }
    }
    std::size_t lo = arg, hi = arg;
    while (lo > 0 && e[lo] - emax > -cut) --lo;
    while (hi < samples && e[hi] - emax > -cut) ++hi;
    const double a = x - reach + static_cast<double>(lo) * dy;
    const double b = x - reach + static_cast<double>(hi) * dy;
    const double c = x - reach + static_cast<double>(arg) * dy;

    auto den_f = [&](double y) { return std::exp(expo(y) - emax); };
    auto num_f = [&](double y) { return (x - y) / t * std::exp(expo(y) - emax); };
    double den = 0.0, num = 0.0, err_den = 0.0, err_num = 0.0;
    for (auto [p, q] : {std::pair{a, c}, std::pair{c, b}}) {
      if (q <= p) continue;
      double e1 = 0.0, e2 = 0.0;
      den += Quad::integrate(den_f, p, q, 20, 1e-14, &e1);
      num += Quad::integrate(num_f, p, q, 20, 1e-14, &e2);
      err_den += e1;
      err_num += e2;
    }
    if (!(den > 0.0) || err_den > 1e-9 * den || err_num > 1e-9 * (den / std::sqrt(t) + std::abs(num))) {
      throw ConvergenceError("Cole-Hopf quadrature did not converge at x = " + std::to_string(x));
    }
    out.push_back(num / den);
  }
  return out;
}

spectral::Field cole_hopf_exact(const spectral::Field& u0, double t) {
  const auto xs = u0.grid.points();
  return spectral::Field(u0.grid, cole_hopf_exact(u0, t, xs));
}

}  // namespace frontlab::evolution
