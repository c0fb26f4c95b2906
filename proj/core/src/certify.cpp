#include "frontlab/certify.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "frontlab/error.hpp"
#include "frontlab/field_io.hpp"

namespace frontlab::certify {

namespace {

// Pivots of T - shift I; returns false on an exactly zero pivot.
bool pivot_count(const Tridiagonal& t, double shift, int& below) {
  below = 0;
  double d = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    d = t.diag[i] - shift - (i == 0 ? 0.0 : t.off[i - 1] * t.off[i - 1] / d);
    if (d == 0.0) return false;
    if (d < 0.0) ++below;
  }
  return true;
}

}  // namespace

InertiaCount count_below(const Tridiagonal& t, double shift) {
  if (t.size() == 0) throw InvalidArgument("empty tridiagonal matrix");
  if (t.off.size() + 1 != t.size()) throw InvalidArgument("tridiagonal off-diagonal has the wrong length");
  InertiaCount out;
  if (pivot_count(t, shift, out.below)) return out;
  double scale = 0.0;
  for (double v : t.diag) scale = std::max(scale, std::abs(v));
  const double bump = 1e-13 * std::max(1.0, scale);
  out.perturbed = true;
  if (pivot_count(t, shift - bump, out.below)) return out;
  throw ConvergenceError("inertia count: zero pivot persists after shift perturbation");
}

int count_negative_eigenvalues(const Tridiagonal& t) { return count_below(t, 0.0).below; }

SchrodingerDiscretization discretize(const std::function<double(double)>& potential, double eps,
                                     std::size_t m, double half_width) {
  if (!(eps >= 0.0 && eps < 1.0)) throw InvalidArgument("eps must lie in [0, 1)");
  if (m < 200) throw InvalidArgument("finite-difference grid needs M >= 200");
  if (!(half_width > 0.0)) throw InvalidArgument("half width must be positive");
  SchrodingerDiscretization d;
  d.half_width = half_width;
  d.m = m;
  d.eps = eps;
  d.spacing = 2.0 * half_width / static_cast<double>(m + 1);
  const double c = (1.0 - eps) / (d.spacing * d.spacing);
  d.matrix.diag.resize(m);
  d.matrix.off.assign(m - 1, -c);
  for (std::size_t i = 0; i < m; ++i) {
    const double x = -half_width + static_cast<double>(i + 1) * d.spacing;
    d.matrix.diag[i] = 2.0 * c + potential(x);
  }
  return d;
}

int SpectralCertificate::min_count() const {
  int best = std::numeric_limits<int>::max();
  for (const auto& r : rows) {
    if (r.eps > 0.0) best = std::min(best, r.count);
  }
  return best == std::numeric_limits<int>::max() ? -1 : best;
}

double SpectralCertificate::argmin_eps() const {
  const int best = min_count();
  for (const auto& r : rows) {
    if (r.eps > 0.0 && r.count == best) return r.eps;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

SpectralCertificate certify_front(const front::FrontProfile& profile, const std::vector<double>& eps_samples,
                                  const FdParams& params) {
  const auto& g = profile.grid();
  const double half_width = params.half_width > 0.0 ? params.half_width : 0.45 * g.length();
  if (half_width >= 0.5 * g.length()) throw InvalidArgument("certificate interval exceeds the front's box");
  std::size_t m = params.m;
  if (m == 0) {
    m = static_cast<std::size_t>(std::ceil(2.0 * half_width / params.target_spacing));
    m = std::max<std::size_t>(m, 200);
  }
  for (double e : eps_samples) {
    if (!(e > 0.0 && e < 1.0)) throw InvalidArgument("eps samples must lie in (0, 1)");
  }
  // Potential phi'/2, band-limited interpolation of the sampled derivative.
  spectral::Interpolator dphi(profile.phi_prime);
  auto potential = [&](double x) { return 0.5 * dphi(x); };
  std::vector<double> pot_coarse, pot_fine;
  auto sample_potential = [&](std::size_t mm) {
    std::vector<double> v(mm);
    const double h = 2.0 * half_width / static_cast<double>(mm + 1);
    for (std::size_t i = 0; i < mm; ++i) v[i] = potential(-half_width + static_cast<double>(i + 1) * h);
    return v;
  };
  pot_coarse = sample_potential(m);
  if (params.richardson) pot_fine = sample_potential(2 * m);

  auto count_with = [&](const std::vector<double>& pot, double eps, bool& near_zero) {
    const std::size_t mm = pot.size();
    std::size_t i = 0;
    auto d = discretize([&](double) { return pot[i++]; }, eps, mm, half_width);
    const int strict = count_below(d.matrix, -1e-10).below;
    const int loose = count_below(d.matrix, 1e-10).below;
    near_zero = loose != strict;
    return strict;
  };

  SpectralCertificate c;
  c.operator_label = profile.op.label;
  c.operator_text = profile.op.expr.to_string();
  c.m = m;
  c.half_width = half_width;
  c.spacing = 2.0 * half_width / static_cast<double>(m + 1);
  c.richardson = params.richardson;
  std::vector<double> eps_list{0.0};
  eps_list.insert(eps_list.end(), eps_samples.begin(), eps_samples.end());
  for (double eps : eps_list) {
    CountRow row;
    row.eps = eps;
    row.count = count_with(pot_coarse, eps, row.near_zero);
    if (params.richardson) {
      bool nz = false;
      row.count_refined = count_with(pot_fine, eps, nz);
      row.near_zero = row.near_zero || nz;
      row.resolved = row.count == row.count_refined;
    }
    c.resolved = c.resolved && row.resolved;
    if (eps > 0.0 && row.count == 1) c.satisfied = true;
    c.rows.push_back(row);
  }
  return c;
}

std::string certificate_json(const SpectralCertificate& c) {
  nlohmann::json j;
  j["operator"] = c.operator_text;
  j["label"] = c.operator_label;
  j["satisfied"] = c.satisfied;
  j["resolved"] = c.resolved;
  j["count_at_zero"] = c.count_at_zero();
  j["min_count"] = c.min_count();
  const double am = c.argmin_eps();
  j["argmin_eps"] = std::isfinite(am) ? nlohmann::json(am) : nlohmann::json(nullptr);
  j["resolution"] = {{"M", c.m}, {"half_width", c.half_width}, {"spacing", c.spacing},
                     {"richardson", c.richardson}};
  auto rows = nlohmann::json::array();
  for (const auto& r : c.rows) {
    rows.push_back({{"eps", r.eps},
                    {"count", r.count},
                    {"count_refined", r.count_refined},
                    {"resolved", r.resolved},
                    {"near_zero", r.near_zero}});
  }
  j["rows"] = rows;
  return j.dump(2);
}

void write_certificate(const std::filesystem::path& path, const SpectralCertificate& c) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << certificate_json(c) << '\n';
}

spectral::Grid sweep_grid(double nu, const SweepOptions& options) {
  const double mu = std::abs(nu);
  // Slowest decay rate of phi' over both tails.
  double rate = 1.0;
  if (mu > 0.0) {
    const double unstable = (-1.0 + std::sqrt(1.0 + 4.0 * mu)) / (2.0 * mu);
    const double stable = mu > 0.25 ? 1.0 / (2.0 * mu) : (1.0 - std::sqrt(1.0 - 4.0 * mu)) / (2.0 * mu);
    rate = std::min(unstable, stable);
  }
  const double half = std::max(0.5 * options.base_length, 25.0 / rate + 10.0);
  const double length = 2.0 * half;
  std::size_t n = 16;
  while (length / static_cast<double>(n) > options.max_spacing) n *= 2;
  return spectral::Grid(n, length);
}

SweepResult sweep_nu(double from, double to, double step, const SweepOptions& options) {
  if (!(step > 0.0)) throw InvalidArgument("sweep step must be positive");
  if (!(to >= from)) throw InvalidArgument("sweep range is empty");
  SweepResult out;
  out.threshold = std::numeric_limits<double>::quiet_NaN();
  const long count = static_cast<long>(std::floor((to - from) / step + 1e-9)) + 1;
  for (long i = 0; i < count; ++i) {
    const double nu = from + static_cast<double>(i) * step;
    SweepRow row;
    row.nu = nu;
    try {
      const auto g = sweep_grid(nu, options);
      front::FrontProfile f = nu == 0.0 ? front::closed_form_burgers(g) : front::shoot_local_front(nu, g);
      row.solved = true;
      auto cert = certify_front(f, options.eps_samples, options.fd);
      row.satisfied = cert.satisfied;
      row.resolved = cert.resolved;
      row.min_count = cert.min_count();
      row.argmin_eps = cert.argmin_eps();
      if (row.satisfied && (std::isnan(out.threshold) || std::abs(nu) > out.threshold)) {
        out.threshold = std::abs(nu);
      }
    } catch (const Error& e) {
      row.error = e.what();
    }
    if (options.on_row) options.on_row(nu, row.satisfied);
    out.rows.push_back(row);
  }
  return out;
}

void write_sweep_csv(const std::filesystem::path& path, const SweepResult& result) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "nu,satisfied,min_count,argmin_eps\n";
  for (const auto& r : result.rows) {
    out << io::format_double(r.nu) << ',' << (r.solved ? (r.satisfied ? "1" : "0") : "NA") << ','
        << r.min_count << ',' << (r.solved ? io::format_double(r.argmin_eps) : "NA") << '\n';
  }
}

}  // namespace frontlab::certify
