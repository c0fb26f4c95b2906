#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <boost/version.hpp>
#include <json.hpp>

#include "frontlab/certify.hpp"
#include "frontlab/diagnostics.hpp"
#include "frontlab/error.hpp"
#include "frontlab/evolution.hpp"
#include "frontlab/field_io.hpp"
#include "frontlab/front.hpp"

#ifndef FRONTLAB_VERSION
#define FRONTLAB_VERSION "unknown"
#endif

namespace frontlab::tool {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_json(const fs::path& path, const json& j) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
}

bool is_zero_symbol(const symbol::SymbolExpr& e) {
  return e.is_constant() && std::abs(symbol::eval_symbol(e, 1.0)) == 0.0;
}

std::string stamp(double t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "t_%012.6f.csv", t);
  return buf;
}

void print_profile(const front::FrontProfile& f, std::ostream& os) {
  const auto& h = f.hypotheses;
  os << "operator      " << f.op.expr.to_string() << " (" << f.op.label << ")\n"
     << "method        " << f.method << ", " << f.iterations << " iterations\n"
     << "residual      " << io::format_double(f.residual_sup) << '\n'
     << "box forcing   " << io::format_double(f.box_forcing) << '\n'
     << "endpoints     (" << f.phi_minus << ", " << f.phi_plus << ")\n"
     << "monotone      " << (f.monotone() ? "yes" : "no") << " (max phi' = " << io::format_double(f.max_slope())
     << ")\n"
     << "hypotheses    |phi'|_2 = " << h.phi_prime_l2 << ", |phi''|_2 = " << h.phi_second_l2
     << ", first moment = " << h.first_moment << ", tail share = " << h.tail_fraction
     << ", edge |phi'| = " << h.edge_phi_prime << (h.edge_decayed ? "" : " (not decayed)") << '\n';
  for (const auto& w : f.warnings) os << "warning: " << w << '\n';
}

json certificate_summary(const certify::SpectralCertificate& c) { return json::parse(certify::certificate_json(c)); }

}  // namespace

config::RunConfig operator_config(const OperatorArgs& a) {
  config::RunConfig c;
  c.preset = a.preset;
  c.nu = a.nu;
  c.frac = config::parse_frac_list(a.frac);
  c.symbol = a.symbol;
  c.n = a.n;
  c.length = a.length;
  c.front_method = a.method;
  return c;
}

front::FrontProfile solve_configured_front(const config::RunConfig& c) {
  const auto spec = config::make_operator(c);
  const auto g = spectral::make_grid(c.n, c.length);
  front::NewtonOptions o;
  o.tol = c.front_tol;
  o.max_iter = c.front_max_iter;
  if (c.front_method == "auto") return front::solve_front(spec, g, o);
  if (c.front_method == "closed_form") {
    if (!is_zero_symbol(spec.expr)) throw InvalidArgument("closed_form front needs the zero operator");
    auto f = front::closed_form_burgers(g);
    f.op = spec;
    return f;
  }
  if (c.front_method == "shoot") {
    double nu = 0.0;
    if (!front::match_kdvb(spec.expr, nu)) throw InvalidArgument("shooting needs L = nu (ik)^3");
    auto f = front::shoot_local_front(nu, g, c.front_tol);
    f.op = spec;
    return f;
  }
  if (c.front_method == "newton") {
    o.pin = front::NewtonOptions::Pin::kCenterValue;
    o.allow_box_forcing = true;
    return front::newton_front(spec, g, front::closed_form_burgers(g), o);
  }
  throw InvalidArgument("unknown front method '" + c.front_method + "'");
}

int cmd_front(const OperatorArgs& a, const fs::path& out, std::ostream& os) {
  const auto c = operator_config(a);
  const auto f = solve_configured_front(c);
  const fs::path csv = out / "front.csv";
  front::write_profile(csv, f);
  print_profile(f, os);
  os << "wrote " << csv.string() << '\n';
  return kOk;
}

int cmd_certify(const CertifyArgs& a, const fs::path& out, std::ostream& os) {
  const auto eps = a.eps.empty() ? certify::default_eps_samples() : config::parse_number_list(a.eps);
  if (!a.sweep_nu.empty()) {
    std::vector<double> r;
    std::stringstream ss(a.sweep_nu);
    std::string item;
    while (std::getline(ss, item, ':')) r.push_back(config::parse_number_list(item).at(0));
    if (r.size() != 3) throw InvalidArgument("--sweep-nu expects from:to:step");
    certify::SweepOptions opt;
    opt.eps_samples = eps;
    opt.on_row = [&](double nu, bool sat) { os << "nu = " << nu << (sat ? "  satisfied\n" : "  not satisfied\n"); };
    const auto res = certify::sweep_nu(r[0], r[1], r[2], opt);
    const fs::path csv = out / "sweep.csv";
    certify::write_sweep_csv(csv, res);
    if (std::isnan(res.threshold)) {
      os << "threshold: no nu satisfied the condition\n";
    } else {
      os << "threshold estimate |nu| = " << res.threshold << '\n';
    }
    os << "wrote " << csv.string() << '\n';
    return kOk;
  }
  front::FrontProfile f = [&] {
    if (!a.profile.empty()) {
      if (!fs::exists(a.profile)) throw IoError("profile not found: " + a.profile);
      return front::read_profile(a.profile);
    }
    return solve_configured_front(operator_config(a.op));
  }();
  const auto cert = certify::certify_front(f, eps);
  const fs::path path = out / "certificate.json";
  certify::write_certificate(path, cert);
  os << certify::certificate_json(cert) << '\n';
  if (!cert.resolved) {
    os << "counts not resolved under grid doubling\n";
    return kUncertified;
  }
  return cert.satisfied ? kOk : kUncertified;
}

int run_simulation(const config::RunConfig& c, std::ostream& os) {
  config::validate(c);
  const fs::path dir = c.out_dir;
  fs::create_directories(dir / "fields");

  json snap;
  snap["format"] = "frontlab-run-config";
  snap["ini"] = config::to_text(c);
  write_json(dir / "config.snapshot", snap);

  const auto spec = config::make_operator(c);
  const auto f = solve_configured_front(c);
  front::write_profile(dir / "front.csv", f);
  std::vector<std::string> warnings = f.warnings;
  json cert_ref = nullptr;
  try {
    const auto cert = certify::certify_front(f, c.eps);
    certify::write_certificate(dir / "certificate.json", cert);
    cert_ref = {{"file", "certificate.json"}, {"satisfied", cert.satisfied}, {"resolved", cert.resolved}};
    if (!cert.satisfied) warnings.push_back("front is not certified");
  } catch (const Error& e) {
    warnings.push_back(std::string("certificate unavailable: ") + e.what());
  }

  const auto g = f.grid();
  const auto v0 = c.amplitude == 0.0 ? spectral::Field(g)
                                     : evolution::make_perturbation(g, evolution::parse_perturbation_kind(c.kind),
                                                                    c.amplitude, c.width, c.seed);
  const auto sc = config::make_stepper(c);
  evolution::EvolveOptions eo;
  eo.p_list = c.p_list;
  eo.keep_snapshots = true;
  std::size_t recorded = 0;
  eo.on_snapshot = [&](const evolution::PerturbationState& s) {
    if (recorded++ % c.field_every == 0) io::write_field_csv(dir / "fields" / stamp(s.t), s.v);
  };
  auto tr = evolution::evolve(v0, f, spec, sc, eo);
  io::write_field_csv(dir / "fields" / stamp(tr.final_state.t), tr.final_state.v);
  diagnostics::write_series_csv(dir / "series.csv", tr.series);
  warnings.insert(warnings.end(), tr.warnings.begin(), tr.warnings.end());

  json meta;
  meta["versions"] = {{"frontlab", FRONTLAB_VERSION}, {"boost", BOOST_LIB_VERSION}, {"compiler", __VERSION__}};
  meta["grid"] = {{"N", g.size()}, {"L", g.length()}};
  meta["front"] = {{"file", "front.csv"},          {"method", f.method},
                   {"residual_sup", f.residual_sup}, {"box_forcing", f.box_forcing},
                   {"monotone", f.monotone()}};
  meta["certificate"] = cert_ref;
  meta["steps"] = tr.steps;
  meta["aborted"] = tr.aborted;
  if (tr.aborted) meta["abort_reason"] = tr.abort_reason;
  meta["monotonicity"] = {{"violations", tr.audit.violations}, {"worst_ratio", tr.audit.worst_ratio}};

  std::ostringstream report;
  report << "steps " << tr.steps << ", t = " << tr.final_state.t << '\n';
  report << "monotonicity: " << tr.audit.violations << " violations (worst relative growth "
         << tr.audit.worst_ratio << ")\n";
  try {
    const auto e = diagnostics::check_energy_inequality(tr.series);
    meta["energy"] = {{"c_fit", e.c_fit}, {"violations", e.violations}, {"usable_steps", e.usable}};
    report << "energy inequality: C_fit = " << e.c_fit << ", " << e.violations << " violations\n";
    json split = json::array();
    for (double eps : c.eps_freq) {
      const auto fsplit = diagnostics::frequency_split_series(tr.snapshots, eps);
      split.push_back({{"eps", eps},
                       {"parseval_error", fsplit.max_parseval_error},
                       {"bernstein_violations", fsplit.bernstein_violations},
                       {"split_violations", diagnostics::split_inequality_violations(fsplit, e.c_fit)}});
    }
    meta["frequency_split"] = split;
  } catch (const InvalidArgument& ex) {
    meta["energy"] = {{"note", ex.what()}};
    report << "energy inequality: " << ex.what() << '\n';
  }
  const auto wr = diagnostics::weighted_bound_monitor(tr.series);
  const auto cb = diagnostics::cumulative_bounds(tr.series);
  meta["weighted"] = {{"sup", wr.sup_weighted},
                      {"cumulative_l2sq", wr.cumulative_l2sq},
                      {"growth_flag", wr.growth_flag},
                      {"chain_violations", wr.chain_violations}};
  meta["cumulative"] = {{"x0_dot_sq", cb.x0_dot_sq}, {"dv_sq", cb.dv_sq}, {"initial_l2sq", cb.initial_l2sq}};
  meta["l1_growth"] = diagnostics::l1_growth(tr.series);
  try {
    const auto table = diagnostics::compare_to_theorem(tr.series, config::resolve_model(c), c.fit_t_min,
                                                       c.fit_t_max, c.delta);
    diagnostics::write_verdicts_csv(dir / "verdicts.csv", table);
    diagnostics::write_loglog_svg(dir / "norms.svg", tr.series, table);
    report << diagnostics::verdict_report(table);
    meta["verdicts"] = {{"file", "verdicts.csv"}, {"all_satisfied", table.all_satisfied()}};
  } catch (const InvalidArgument& ex) {
    report << "verdicts: " << ex.what() << '\n';
    meta["verdicts"] = {{"note", ex.what()}};
  }
  meta["warnings"] = warnings;
  write_json(dir / "meta.json", meta);
  write_text(dir / "report.txt", report.str());
  os << report.str();
  for (const auto& w : warnings) os << "warning: " << w << '\n';
  if (tr.aborted) {
    io::write_field_csv(dir / "fields" / "last_good.csv", tr.final_state.v);
    os << "aborted: " << tr.abort_reason << '\n';
    return kUnstable;
  }
  return kOk;
}

int cmd_oracle(const OracleArgs& a, const fs::path& out, std::ostream& os) {
  const auto g = spectral::make_grid(a.n, a.length);
  const auto fr = front::closed_form_burgers(g);
  const auto spec = symbol::burgers();
  const double amp = a.amplitude;
  const auto v0 = spectral::Field::sample(g, [&](double x) { return amp * std::exp(-x * x); });
  const auto u0 = spectral::Field::sample(g, [&](double x) { return -std::tanh(0.5 * x) + amp * std::exp(-x * x); });
  auto times = config::parse_number_list(a.times);
  std::sort(times.begin(), times.end());
  bool ok = true;
  std::vector<double> ts, errs;
  for (double t : times) {
    evolution::StepperConfig sc;
    sc.dt = a.dt;
    sc.t_end = t;
    sc.stride = 1u << 30;
    sc.scheme = evolution::parse_scheme(a.scheme);
    const auto tr = evolution::evolve(v0, fr, spec, sc);
    if (tr.aborted) throw InstabilityError(tr.abort_reason);
    const auto u = evolution::reconstruct_solution(tr.final_state, fr);
    const auto exact = evolution::cole_hopf_exact(u0, t);
    double err = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) err = std::max(err, std::abs(u[j] - exact[j]));
    os << "t = " << t << "  sup |u - u_exact| = " << io::format_double(err) << '\n';
    ts.push_back(t);
    errs.push_back(err);
    if (!(err <= a.threshold)) ok = false;
  }
  io::write_columns_csv(out / "oracle.csv", {"t", "sup_error"}, {ts, errs});
  if (!ok) {
    os << "discrepancy exceeds threshold " << a.threshold << '\n';
    return kUnstable;
  }
  return kOk;
}

int cmd_rates(const fs::path& run_dir, const fs::path& out, std::ostream& os) {
  const fs::path series_path = run_dir / "series.csv";
  if (!fs::exists(series_path)) throw IoError("missing series: " + series_path.string());
  std::ifstream in(run_dir / "config.snapshot");
  if (!in) throw IoError("missing config.snapshot in " + run_dir.string());
  const json snap = json::parse(in, nullptr, false);
  if (snap.is_discarded() || !snap.contains("ini")) throw IoError("config.snapshot is not valid");
  const auto c = config::from_text(snap["ini"].get<std::string>());
  const auto series = diagnostics::read_series_csv(series_path);
  const auto table =
      diagnostics::compare_to_theorem(series, config::resolve_model(c), c.fit_t_min, c.fit_t_max, c.delta);
  diagnostics::write_verdicts_csv(out / "verdicts.csv", table);
  os << diagnostics::verdict_report(table);
  return kOk;
}

int cmd_sweep(const config::RunConfig& base, const SweepArgs& a, std::ostream& os) {
  // Cartesian product of the --vary lists.
  std::vector<std::vector<std::string>> combos{{}};
  for (const auto& v : a.vary) {
    const auto eq = v.find('=');
    if (eq == std::string::npos) throw InvalidArgument("--vary expects section.key=v1,v2,...");
    const std::string key = v.substr(0, eq);
    std::vector<std::string> values;
    std::stringstream ss(v.substr(eq + 1));
    std::string item;
    while (std::getline(ss, item, ',')) values.push_back(item);
    std::vector<std::vector<std::string>> next;
    for (const auto& c : combos) {
      for (const auto& val : values) {
        auto d = c;
        d.push_back(key + "=" + val);
        next.push_back(std::move(d));
      }
    }
    combos = std::move(next);
  }
  std::vector<config::RunConfig> runs;
  for (std::size_t i = 0; i < combos.size(); ++i) {
    auto c = base;
    for (const auto& o : combos[i]) config::apply_override(c, o);
    c.out_dir = (fs::path(base.out_dir) / ("run_" + std::to_string(i))).string();
    config::validate(c);
    runs.push_back(std::move(c));
  }
  std::vector<int> codes(runs.size(), kOk);
  std::vector<std::string> logs(runs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < runs.size(); i = next++) {
      std::ostringstream log;
      try {
        codes[i] = run_simulation(runs[i], log);
      } catch (const InstabilityError& e) {
        log << "error: " << e.what() << '\n';
        codes[i] = kUnstable;
      } catch (const ConvergenceError& e) {
        log << "error: " << e.what() << '\n';
        codes[i] = kUnstable;
      } catch (const Error& e) {
        log << "error: " << e.what() << '\n';
        codes[i] = kUsage;
      }
      logs[i] = log.str();
    }
  };
  {
    std::vector<std::jthread> pool;
    const std::size_t n = std::max<std::size_t>(1, std::min(a.threads, runs.size()));
    for (std::size_t t = 0; t < n; ++t) pool.emplace_back(worker);
  }
  std::ofstream index(fs::path(base.out_dir) / "sweep_index.csv");
  index << "run,overrides,exit\n";
  int worst = kOk;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    std::string ov;
    for (const auto& o : combos[i]) ov += (ov.empty() ? "" : ";") + o;
    index << i << ",\"" << ov << "\"," << codes[i] << '\n';
    os << "run_" << i << " [" << ov << "] exit " << codes[i] << '\n' << logs[i];
    worst = std::max(worst, codes[i]);
  }
  return worst;
}

}  // namespace frontlab::tool
