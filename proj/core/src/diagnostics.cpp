#include "frontlab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include <boost/math/tools/roots.hpp>

#include "frontlab/error.hpp"
#include "frontlab/field_io.hpp"

namespace frontlab::diagnostics {

namespace {

std::string lp_column(double p) { return "lp:" + io::format_double(p); }

std::ofstream open_for_write(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

}  // namespace

EnergyCheck check_energy_inequality(const NormSeries& series) {
  EnergyCheck out;
  out.c_fit = std::numeric_limits<double>::infinity();
  const auto& r = series.records;
  for (std::size_t i = 0; i + 1 < r.size(); ++i) {
    const double e0 = r[i].l2 * r[i].l2, e1 = r[i + 1].l2 * r[i + 1].l2;
    if (e1 - e0 > 1e-10 * e0) ++out.violations;
    if (r[i].dv_l2 <= 1e-12 || r[i + 1].dv_l2 <= 1e-12) continue;
    const double dt = r[i + 1].t - r[i].t;
    if (!(dt > 0.0)) throw InvalidArgument("series times are not increasing");
    const double dv2 = 0.5 * (r[i].dv_l2 * r[i].dv_l2 + r[i + 1].dv_l2 * r[i + 1].dv_l2);
    out.c_fit = std::min(out.c_fit, -(e1 - e0) / (dt * dv2));
    ++out.usable;
  }
  if (out.usable < 10) throw InvalidArgument("series too short: " + std::to_string(out.usable) + " usable steps");
  return out;
}

MonotonicityReport monotonicity_audit(const NormSeries& series) {
  MonotonicityReport out;
  const auto& r = series.records;
  for (std::size_t i = 0; i + 1 < r.size(); ++i) {
    if (r[i].l2 <= 0.0) {
      if (r[i + 1].l2 > 0.0) ++out.violations;
      continue;
    }
    const double ratio = r[i + 1].l2 / r[i].l2 - 1.0;
    out.worst_ratio = std::max(out.worst_ratio, ratio);
    if (ratio > 1e-10) ++out.violations;
  }
  return out;
}

double l1_growth(const NormSeries& series) {
  if (series.records.empty()) throw InvalidArgument("empty series");
  const double v0 = series.records.front().l1;
  if (v0 <= 0.0) return 1.0;
  double worst = 0.0;
  for (const auto& r : series.records) worst = std::max(worst, r.l1 / v0);
  return worst;
}

FrequencySplit frequency_split_series(std::span<const evolution::PerturbationState> snapshots, double eps_freq) {
  if (snapshots.empty()) throw InvalidArgument("frequency split needs snapshots");
  if (!(eps_freq > 0.0)) throw InvalidArgument("eps_freq must be positive");
  FrequencySplit out;
  out.eps_freq = eps_freq;
  out.band_measure = spectral::band_measure(snapshots.front().v.grid, eps_freq);
  for (const auto& s : snapshots) {
    const auto [lo, hi] = spectral::band_project(s.v, eps_freq);
    const double a = std::pow(spectral::lp_norm(lo, 2.0), 2);
    const double b = std::pow(spectral::lp_norm(hi, 2.0), 2);
    const double tot = std::pow(spectral::lp_norm(s.v, 2.0), 2);
    const double l1 = spectral::lp_norm(s.v, 1.0);
    out.times.push_back(s.t);
    out.low.push_back(a);
    out.high.push_back(b);
    out.total.push_back(tot);
    out.l1.push_back(l1);
    if (tot > 0.0) out.max_parseval_error = std::max(out.max_parseval_error, std::abs(a + b - tot) / tot);
    if (a > out.band_measure * l1 * l1 * (1.0 + 1e-12)) ++out.bernstein_violations;
  }
  return out;
}

std::size_t split_inequality_violations(const FrequencySplit& split, double c_fit) {
  if (split.times.empty()) return 0;
  const double i0 = split.total.front();
  const double t0 = split.times.front();
  const double eps = split.eps_freq;
  double low_max = 0.0;
  std::size_t bad = 0;
  for (std::size_t i = 0; i < split.times.size(); ++i) {
    low_max = std::max(low_max, split.low[i]);
    const double bound = i0 * std::exp(-c_fit * eps * eps * (split.times[i] - t0)) + low_max;
    if (split.high[i] > bound * (1.0 + 1e-12) + 1e-300) ++bad;
  }
  return bad;
}

double optimal_eps(double t, double c1) {
  if (!(t > 0.0) || !(c1 > 0.0)) throw InvalidArgument("optimal_eps needs t > 0 and c1 > 0");
  // In s = ln eps: f(s) = -c1 t e^{2s} - s, decreasing from +inf to -c1 t at s = 0.
  auto f = [&](double s) { return -c1 * t * std::exp(2.0 * s) - s; };
  double lo = -1.0;
  while (f(lo) <= 0.0) lo *= 2.0;
  std::uintmax_t iters = 200;
  const auto r = boost::math::tools::toms748_solve(f, lo, 0.0, boost::math::tools::eps_tolerance<double>(52), iters);
  return std::exp(0.5 * (r.first + r.second));
}

RateFit fit_rate(std::span<const double> t, std::span<const double> y, double t_min, double t_max, double beta) {
  if (t.size() != y.size()) throw InvalidArgument("fit_rate: t and y differ in length");
  if (!(t_max > t_min)) throw InvalidArgument("fit_rate: empty window");
  if (beta != 0.0 && t_min < 2.0) throw InvalidArgument("fit_rate: window must start at t >= 2 with a log correction");
  std::vector<double> xs, zs;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_min || t[i] > t_max) continue;
    if (!(y[i] > 0.0) || !(t[i] > 0.0)) throw InvalidArgument("fit_rate: nonpositive value in window");
    xs.push_back(std::log(t[i]));
    zs.push_back(std::log(y[i]) - (beta != 0.0 ? beta * std::log(std::log(t[i])) : 0.0));
  }
  if (xs.size() < 8) throw InvalidArgument("fit_rate: window has fewer than 8 samples");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, mz = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    mz += zs[i];
  }
  mx /= n;
  mz /= n;
  double sxx = 0.0, sxz = 0.0, szz = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxz += (xs[i] - mx) * (zs[i] - mz);
    szz += (zs[i] - mz) * (zs[i] - mz);
  }
  RateFit out;
  out.t_min = t_min;
  out.t_max = t_max;
  out.log_correction = beta;
  out.samples = xs.size();
  out.exponent = sxz / sxx;
  out.log_amplitude = mz - out.exponent * mx;
  out.r2 = szz > 0.0 ? sxz * sxz / (sxx * szz) : 1.0;
  return out;
}

std::string model_name(Model m) { return m == Model::kKdvBurgers ? "kdv_burgers" : "fractional_odd"; }

std::vector<Prediction> predicted_rates(Model model, std::span<const double> p_list, double delta) {
  std::vector<Prediction> out;
  auto rate_for = [&](double p) -> Prediction {
    if (model == Model::kKdvBurgers) {
      if (p < 2.0) return {lp_column(p), p, (1.0 - 1.0 / p) - delta, 0.0};
      return {lp_column(p), p, std::isinf(p) ? 0.0 : 1.0 / p, 0.0};
    }
    double r = 0.0;
    if (p <= 2.0) r = 0.5 * (1.0 - 1.0 / p);
    else r = 7.0 / 24.0 - (std::isinf(p) ? 0.0 : 1.0 / (12.0 * p));
    return {lp_column(p), p, r, r};
  };
  auto l2 = rate_for(2.0);
  l2.column = "l2";
  out.push_back(l2);
  for (double p : p_list) {
    if (!(p > 1.0) || p == 2.0 || std::isinf(p)) continue;
    out.push_back(rate_for(p));
  }
  auto linf = rate_for(std::numeric_limits<double>::infinity());
  linf.column = "linf";
  out.push_back(linf);
  if (model == Model::kFractionalOdd) out.push_back({"dv_l2", 2.0, 1.0 / 3.0, 1.0 / 3.0});
  return out;
}

bool VerdictTable::all_satisfied() const {
  return std::all_of(rows.begin(), rows.end(), [](const Verdict& v) { return v.satisfied; });
}

VerdictTable compare_to_theorem(const NormSeries& series, Model model, double t_min, double t_max, double delta) {
  if (series.records.size() < 2) throw InvalidArgument("series too short for rate verdicts");
  const auto t = series.times();
  if (!(t_max > t_min)) {
    t_max = t.back();
    t_min = 0.25 * t.back();
  }
  VerdictTable table;
  table.model = model;
  table.t_min = t_min;
  table.t_max = t_max;
  table.delta = delta;
  for (const auto& pred : predicted_rates(model, series.p_list, delta)) {
    const auto y = series.column(pred.column);
    Verdict v;
    v.prediction = pred;
    if (pred.beta != 0.0 && t_min <= 1.0) throw InvalidArgument("log-corrected envelopes need t_min > 1");
    bool first = true;
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (t[i] < t_min || t[i] > t_max) continue;
      double env = y[i] * std::pow(t[i], pred.rate);
      if (pred.beta != 0.0) env *= std::pow(std::log(t[i]), -pred.beta);
      if (first) {
        v.envelope_start = env;
        first = false;
      }
      v.envelope_sup = std::max(v.envelope_sup, env);
    }
    if (first) throw InvalidArgument("verdict window contains no samples");
    v.satisfied = v.envelope_sup <= 2.0 * v.envelope_start;
    try {
      v.fit = fit_rate(t, y, std::max(t_min, pred.beta != 0.0 ? 2.0 : 0.0), t_max, pred.beta);
    } catch (const InvalidArgument&) {
      v.fit.exponent = std::numeric_limits<double>::quiet_NaN();
    }
    table.rows.push_back(v);
  }
  return table;
}

WeightedReport weighted_bound_monitor(const NormSeries& series) {
  WeightedReport out;
  const auto& r = series.records;
  if (r.empty()) return out;
  const double w0 = r.front().weighted;
  for (std::size_t i = 0; i < r.size(); ++i) {
    out.sup_weighted = std::max(out.sup_weighted, r[i].weighted);
    if (r[i].weighted > 3.0 * w0 && r[i].weighted > 0.0) out.growth_flag = true;
    if (i > 0) {
      out.cumulative_l2sq += 0.5 * (r[i].t - r[i - 1].t) * (r[i].l2 * r[i].l2 + r[i - 1].l2 * r[i - 1].l2);
    }
    const double lhs = (r[i].t - r.front().t) * r[i].l2 * r[i].l2;
    if (lhs > out.cumulative_l2sq * (1.0 + 1e-12) + 1e-300) ++out.chain_violations;
  }
  return out;
}

CumulativeReport cumulative_bounds(const NormSeries& series) {
  CumulativeReport out;
  const auto& r = series.records;
  if (r.empty()) return out;
  out.initial_l2sq = r.front().l2 * r.front().l2;
  for (std::size_t i = 1; i < r.size(); ++i) {
    const double dt = r[i].t - r[i - 1].t;
    out.x0_dot_sq += 0.5 * dt * (r[i].x0_dot * r[i].x0_dot + r[i - 1].x0_dot * r[i - 1].x0_dot);
    out.dv_sq += 0.5 * dt * (r[i].dv_l2 * r[i].dv_l2 + r[i - 1].dv_l2 * r[i - 1].dv_l2);
  }
  return out;
}

void write_series_csv(const std::filesystem::path& path, const NormSeries& series) {
  std::vector<std::string> names{"t", "x0", "x0_dot", "l1", "l2"};
  for (double p : series.p_list) names.push_back(lp_column(p));
  for (const char* n : {"linf", "dv_l2", "weighted", "m_t"}) names.emplace_back(n);
  std::vector<std::vector<double>> cols;
  for (const auto& n : names) cols.push_back(series.column(n));
  io::write_columns_csv(path, names, cols);
}

NormSeries read_series_csv(const std::filesystem::path& path) {
  const auto table = io::read_columns_csv(path);
  NormSeries s;
  for (const auto& n : table.names) {
    if (n.starts_with("lp:")) s.p_list.push_back(std::stod(n.substr(3)));
  }
  const auto& t = table.column("t");
  for (std::size_t i = 0; i < t.size(); ++i) {
    evolution::NormRecord r;
    r.t = t[i];
    r.x0 = table.column("x0")[i];
    r.x0_dot = table.column("x0_dot")[i];
    r.l1 = table.column("l1")[i];
    r.l2 = table.column("l2")[i];
    for (double p : s.p_list) r.lp.push_back(table.column(lp_column(p))[i]);
    r.linf = table.column("linf")[i];
    r.dv_l2 = table.column("dv_l2")[i];
    r.weighted = table.column("weighted")[i];
    r.m_t = table.column("m_t")[i];
    s.records.push_back(std::move(r));
  }
  return s;
}

void write_verdicts_csv(const std::filesystem::path& path, const VerdictTable& table) {
  auto out = open_for_write(path);
  out << "norm,p,predicted_rate,beta,fitted_exponent,envelope_start,envelope_sup,satisfied\n";
  for (const auto& v : table.rows) {
    out << v.prediction.column << ',' << io::format_double(v.prediction.p) << ','
        << io::format_double(v.prediction.rate) << ',' << io::format_double(v.prediction.beta) << ','
        << io::format_double(v.fit.exponent) << ',' << io::format_double(v.envelope_start) << ','
        << io::format_double(v.envelope_sup) << ',' << (v.satisfied ? 1 : 0) << '\n';
  }
}

std::string verdict_report(const VerdictTable& table) {
  std::ostringstream os;
  os << "model " << model_name(table.model) << ", window [" << table.t_min << ", " << table.t_max
     << "], delta " << table.delta << '\n';
  os << std::left << std::setw(10) << "norm" << std::setw(12) << "rate" << std::setw(10) << "beta"
     << std::setw(12) << "fitted" << std::setw(12) << "env ratio" << "verdict\n";
  for (const auto& v : table.rows) {
    const double ratio = v.envelope_start > 0.0 ? v.envelope_sup / v.envelope_start : 0.0;
    os << std::left << std::setw(10) << v.prediction.column << std::setw(12) << std::setprecision(4)
       << v.prediction.rate << std::setw(10) << v.prediction.beta << std::setw(12) << -v.fit.exponent
       << std::setw(12) << ratio << (v.satisfied ? "bound satisfied" : "bound exceeded") << '\n';
  }
  return os.str();
}

void write_loglog_svg(const std::filesystem::path& path, const NormSeries& series, const VerdictTable& table) {
  constexpr double kW = 640, kH = 420, kPad = 50;
  const auto t = series.times();
  double tlo = std::numeric_limits<double>::infinity(), thi = 0.0;
  double ylo = std::numeric_limits<double>::infinity(), yhi = 0.0;
  std::vector<std::vector<std::pair<double, double>>> curves;
  for (const auto& v : table.rows) {
    const auto y = series.column(v.prediction.column);
    std::vector<std::pair<double, double>> c;
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (t[i] <= 0.0 || y[i] <= 0.0) continue;
      c.emplace_back(std::log10(t[i]), std::log10(y[i]));
      tlo = std::min(tlo, c.back().first);
      thi = std::max(thi, c.back().first);
      ylo = std::min(ylo, c.back().second);
      yhi = std::max(yhi, c.back().second);
    }
    curves.push_back(std::move(c));
  }
  auto out = open_for_write(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH << "\">\n";
  out << "<rect x=\"" << kPad << "\" y=\"" << kPad / 2 << "\" width=\"" << kW - 1.5 * kPad << "\" height=\""
      << kH - 1.5 * kPad << "\" fill=\"none\" stroke=\"black\"/>\n";
  if (!(thi > tlo) || !(yhi > ylo)) {
    out << "</svg>\n";
    return;
  }
  auto sx = [&](double a) { return kPad + (a - tlo) / (thi - tlo) * (kW - 1.5 * kPad); };
  auto sy = [&](double b) { return kPad / 2 + (yhi - b) / (yhi - ylo) * (kH - 1.5 * kPad); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  for (std::size_t c = 0; c < curves.size(); ++c) {
    if (curves[c].empty()) continue;
    const char* col = colors[c % 6];
    out << "<polyline fill=\"none\" stroke=\"" << col << "\" points=\"";
    for (const auto& [a, b] : curves[c]) out << sx(a) << ',' << sy(b) << ' ';
    out << "\"/>\n";
    // guide with the predicted slope through the first point of the window
    const auto& p0 = curves[c].front();
    const double slope = -table.rows[c].prediction.rate;
    out << "<line x1=\"" << sx(p0.first) << "\" y1=\"" << sy(p0.second) << "\" x2=\"" << sx(thi) << "\" y2=\""
        << sy(std::clamp(p0.second + slope * (thi - p0.first), ylo, yhi)) << "\" stroke=\"" << col
        << "\" stroke-dasharray=\"4 3\"/>\n";
    out << "<text x=\"" << kW - kPad * 1.4 << "\" y=\"" << kPad + 14 * static_cast<double>(c) << "\" fill=\"" << col
        << "\" font-size=\"11\">" << table.rows[c].prediction.column << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace frontlab::diagnostics
