#include "frontlab/run_config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "frontlab/error.hpp"
#include "frontlab/field_io.hpp"

namespace frontlab::config {

namespace pt = boost::property_tree;

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size()) throw InvalidArgument("config: '" + key + "' is not a number: " + t);
  return v;
}

template <typename Int>
Int to_int(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  Int v = 0;
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size()) throw InvalidArgument("config: '" + key + "' is not an integer: " + t);
  return v;
}

bool to_bool(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1") return true;
  if (t == "false" || t == "0") return false;
  throw InvalidArgument("config: '" + key + "' must be true or false");
}

std::string fmt(double v) { return io::format_double(v); }

}  // namespace

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (trim(item).empty()) continue;
    out.push_back(to_double("list", item));
  }
  return out;
}

std::string format_number_list(const std::vector<double>& values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) s += (i ? "," : "") + fmt(values[i]);
  return s;
}

std::vector<symbol::FracTerm> parse_frac_list(const std::string& text) {
  std::vector<symbol::FracTerm> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (trim(item).empty()) continue;
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw InvalidArgument("frac term must look like a:alpha, got '" + item + "'");
    out.push_back({to_double("frac", item.substr(0, colon)), to_double("frac", item.substr(colon + 1))});
  }
  return out;
}

std::string format_frac_list(const std::vector<symbol::FracTerm>& terms) {
  std::string s;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    s += (i ? "," : "") + fmt(terms[i].a) + ":" + fmt(terms[i].alpha);
  }
  return s;
}

std::string to_text(const RunConfig& c) {
  pt::ptree t;
  t.put("operator.preset", c.preset);
  t.put("operator.nu", fmt(c.nu));
  t.put("operator.frac", format_frac_list(c.frac));
  t.put("operator.symbol", c.symbol);
  t.put("grid.n", std::to_string(c.n));
  t.put("grid.length", fmt(c.length));
  t.put("front.method", c.front_method);
  t.put("front.tol", fmt(c.front_tol));
  t.put("front.max_iter", std::to_string(c.front_max_iter));
  t.put("certificate.eps", format_number_list(c.eps));
  t.put("perturbation.kind", c.kind);
  t.put("perturbation.amplitude", fmt(c.amplitude));
  t.put("perturbation.width", fmt(c.width));
  t.put("perturbation.seed", std::to_string(c.seed));
  t.put("stepper.scheme", c.scheme);
  t.put("stepper.dt", fmt(c.dt));
  t.put("stepper.gamma", fmt(c.gamma));
  t.put("stepper.t_end", fmt(c.t_end));
  t.put("stepper.stride", std::to_string(c.stride));
  t.put("stepper.dealias", c.dealias ? "true" : "false");
  t.put("diagnostics.p_list", format_number_list(c.p_list));
  t.put("diagnostics.fit_t_min", fmt(c.fit_t_min));
  t.put("diagnostics.fit_t_max", fmt(c.fit_t_max));
  t.put("diagnostics.delta", fmt(c.delta));
  t.put("diagnostics.eps_freq", format_number_list(c.eps_freq));
  t.put("diagnostics.model", c.model);
  t.put("output.dir", c.out_dir);
  t.put("output.field_every", std::to_string(c.field_every));
  std::ostringstream os;
  pt::write_ini(os, t);
  return os.str();
}

RunConfig from_text(const std::string& text, RunConfig base) {
  pt::ptree t;
  std::istringstream is(text);
  try {
    pt::read_ini(is, t);
  } catch (const pt::ini_parser_error& e) {
    throw InvalidArgument(std::string("config: ") + e.what());
  }
  RunConfig c = std::move(base);
  static const std::set<std::string> known{
      "operator.preset", "operator.nu", "operator.frac", "operator.symbol", "grid.n", "grid.length",
      "front.method", "front.tol", "front.max_iter", "certificate.eps", "perturbation.kind",
      "perturbation.amplitude", "perturbation.width", "perturbation.seed", "stepper.scheme", "stepper.dt",
      "stepper.gamma", "stepper.t_end", "stepper.stride", "stepper.dealias", "diagnostics.p_list",
      "diagnostics.fit_t_min", "diagnostics.fit_t_max", "diagnostics.delta", "diagnostics.eps_freq",
      "diagnostics.model", "output.dir", "output.field_every"};
  for (const auto& [section, body] : t) {
    if (body.empty()) throw InvalidArgument("config: key '" + section + "' outside any section");
    for (const auto& [key, value] : body) {
      const std::string full = section + "." + key;
      if (!known.contains(full)) throw InvalidArgument("config: unknown key '" + full + "'");
      const std::string v = value.get_value<std::string>();
      if (full == "operator.preset") c.preset = trim(v);
      else if (full == "operator.nu") c.nu = to_double(full, v);
      else if (full == "operator.frac") c.frac = parse_frac_list(v);
      else if (full == "operator.symbol") c.symbol = trim(v);
      else if (full == "grid.n") c.n = to_int<std::size_t>(full, v);
      else if (full == "grid.length") c.length = to_double(full, v);
      else if (full == "front.method") c.front_method = trim(v);
      else if (full == "front.tol") c.front_tol = to_double(full, v);
      else if (full == "front.max_iter") c.front_max_iter = to_int<int>(full, v);
      else if (full == "certificate.eps") c.eps = parse_number_list(v);
      else if (full == "perturbation.kind") c.kind = trim(v);
      else if (full == "perturbation.amplitude") c.amplitude = to_double(full, v);
      else if (full == "perturbation.width") c.width = to_double(full, v);
      else if (full == "perturbation.seed") c.seed = to_int<std::uint64_t>(full, v);
      else if (full == "stepper.scheme") c.scheme = trim(v);
      else if (full == "stepper.dt") c.dt = to_double(full, v);
      else if (full == "stepper.gamma") c.gamma = to_double(full, v);
      else if (full == "stepper.t_end") c.t_end = to_double(full, v);
      else if (full == "stepper.stride") c.stride = to_int<std::size_t>(full, v);
      else if (full == "stepper.dealias") c.dealias = to_bool(full, v);
      else if (full == "diagnostics.p_list") c.p_list = parse_number_list(v);
      else if (full == "diagnostics.fit_t_min") c.fit_t_min = to_double(full, v);
      else if (full == "diagnostics.fit_t_max") c.fit_t_max = to_double(full, v);
      else if (full == "diagnostics.delta") c.delta = to_double(full, v);
      else if (full == "diagnostics.eps_freq") c.eps_freq = parse_number_list(v);
      else if (full == "diagnostics.model") c.model = trim(v);
      else if (full == "output.dir") c.out_dir = trim(v);
      else if (full == "output.field_every") c.field_every = to_int<std::size_t>(full, v);
    }
  }
  return c;
}

void apply_override(RunConfig& c, const std::string& assignment) {
  const auto eq = assignment.find('=');
  const auto dot = assignment.find('.');
  if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
    throw InvalidArgument("override must look like section.key=value, got '" + assignment + "'");
  }
  const std::string section = trim(assignment.substr(0, dot));
  const std::string key = trim(assignment.substr(dot + 1, eq - dot - 1));
  c = from_text("[" + section + "]\n" + key + " = " + assignment.substr(eq + 1) + "\n", c);
}

void write_config(const std::filesystem::path& path, const RunConfig& c) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << to_text(c);
}

RunConfig read_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_text(ss.str());
}

void validate(const RunConfig& c) {
  make_operator(c);
  spectral::make_grid(c.n, c.length);
  static const std::set<std::string> methods{"auto", "newton", "shoot", "closed_form"};
  if (!methods.contains(c.front_method)) throw InvalidArgument("front method must be auto, newton, shoot or closed_form");
  if (!(c.front_tol > 0.0) || c.front_max_iter < 1) throw InvalidArgument("front tolerances must be positive");
  for (double e : c.eps) {
    if (!(e > 0.0 && e < 1.0)) throw InvalidArgument("certificate eps must lie in (0, 1)");
  }
  evolution::parse_perturbation_kind(c.kind);
  if (!(c.amplitude >= 0.0) || !(c.width > 0.0)) {
    throw InvalidArgument("perturbation amplitude must be nonnegative and width positive");
  }
  evolution::parse_scheme(c.scheme);
  if (!(c.dt > 0.0) || !(c.t_end >= 0.0) || c.stride == 0) throw InvalidArgument("stepper needs dt > 0, t_end >= 0, stride >= 1");
  if (!(c.gamma > 1.0)) throw InvalidArgument("gamma must exceed 1 for endpoints (1, -1)");
  for (double p : c.p_list) {
    if (!(p >= 1.0)) throw InvalidArgument("p_list entries must be >= 1");
  }
  if (!(c.delta > 0.0)) throw InvalidArgument("delta must be positive");
  for (double e : c.eps_freq) {
    if (!(e > 0.0)) throw InvalidArgument("eps_freq entries must be positive");
  }
  if (c.field_every == 0) throw InvalidArgument("output.field_every must be at least 1");
  resolve_model(c);
}

symbol::MultiplierSpec make_operator(const RunConfig& c) {
  symbol::MultiplierSpec spec;
  if (!c.symbol.empty()) {
    spec = symbol::make_spec(symbol::parse_symbol(c.symbol), c.symbol);
  } else {
    spec = symbol::preset(c.preset, {c.nu, c.frac});
  }
  if (!spec.admissible()) throw InvalidArgument("operator is not admissible: " + spec.admissibility.detail);
  return spec;
}

evolution::StepperConfig make_stepper(const RunConfig& c) {
  evolution::StepperConfig s;
  s.dt = c.dt;
  s.scheme = evolution::parse_scheme(c.scheme);
  s.gamma = c.gamma;
  s.dealias = c.dealias;
  s.t_end = c.t_end;
  s.stride = c.stride;
  return s;
}

diagnostics::Model resolve_model(const RunConfig& c) {
  if (c.model == "kdv_burgers") return diagnostics::Model::kKdvBurgers;
  if (c.model == "fractional_odd") return diagnostics::Model::kFractionalOdd;
  if (c.model != "auto") throw InvalidArgument("model must be auto, kdv_burgers or fractional_odd");
  return c.symbol.empty() && c.preset == "frac" ? diagnostics::Model::kFractionalOdd : diagnostics::Model::kKdvBurgers;
}

}  // namespace frontlab::config
