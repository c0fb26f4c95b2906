#include "frontlab/field_io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "frontlab/error.hpp"

namespace frontlab::io {

namespace {

static_assert(std::endian::native == std::endian::little,
              "binary field format assumes a little-endian host");

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = {}) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::out | std::ios::trunc | mode);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path, std::ios::openmode mode = {}) {
  std::ifstream in(path, std::ios::in | mode);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> parts;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) {
    while (!item.empty() && (item.back() == '\r' || item.back() == ' ')) item.pop_back();
    std::size_t start = 0;
    while (start < item.size() && item[start] == ' ') ++start;
    parts.push_back(item.substr(start));
  }
  return parts;
}

double parse_double(const std::string& text, const std::filesystem::path& path) {
  double v = 0.0;
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end) {
    // from_chars does not accept "inf"/"nan" spellings everywhere; fall back.
    try {
      std::size_t used = 0;
      v = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
    } catch (const std::exception&) {
      throw IoError("bad number '" + text + "' in " + path.string());
    }
  }
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void write_columns_csv(const std::filesystem::path& path,
                       const std::vector<std::string>& names,
                       const std::vector<std::vector<double>>& columns) {
  if (names.size() != columns.size()) throw InvalidArgument("column names/data mismatch");
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (const auto& c : columns) {
    if (c.size() != rows) throw InvalidArgument("CSV columns differ in length");
  }
  auto out = open_out(path);
  for (std::size_t i = 0; i < names.size(); ++i) out << (i ? "," : "") << names[i];
  out << '\n';
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      out << (i ? "," : "") << format_double(columns[i][r]);
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

const std::vector<double>& CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return columns[i];
  }
  throw IoError("CSV has no column '" + name + "'");
}

bool CsvTable::has(const std::string& name) const {
  for (const auto& n : names) {
    if (n == name) return true;
  }
  return false;
}

CsvTable read_columns_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty CSV: " + path.string());
  table.names = split(line);
  table.columns.resize(table.names.size());
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    auto parts = split(line);
    if (parts.size() != table.names.size()) throw IoError("ragged CSV row in " + path.string());
    for (std::size_t i = 0; i < parts.size(); ++i) {
      table.columns[i].push_back(parse_double(parts[i], path));
    }
  }
  return table;
}

void write_field_csv(const std::filesystem::path& path, const spectral::Field& f) {
  write_columns_csv(path, {"x", "value"}, {f.grid.points(), f.values});
}

spectral::Field read_field_csv(const std::filesystem::path& path) {
  CsvTable t = read_columns_csv(path);
  if (t.names.size() < 2) throw IoError("field CSV needs columns x,value");
  const auto& x = t.columns[0];
  const std::size_t n = x.size();
  if (n < 2) throw IoError("field CSV too short: " + path.string());
  // Recover L from the uniform spacing: x_j = -L/2 + j L / N.
  const double length = -2.0 * x.front();
  try {
    spectral::Grid g(n, length);
    if (std::abs(g.x(n - 1) - x.back()) > 1e-9 * length) {
      throw IoError("field CSV is not on a standard grid: " + path.string());
    }
    return spectral::Field(g, t.columns[1]);
  } catch (const InvalidArgument& e) {
    throw IoError(std::string("field CSV grid: ") + e.what());
  }
}

void write_field_binary(const std::filesystem::path& path, const spectral::Field& f) {
  auto out = open_out(path, std::ios::binary);
  const std::uint64_t n = f.size();
  const double length = f.grid.length();
  out.write(reinterpret_cast<const char*>(&n), sizeof n);
  out.write(reinterpret_cast<const char*>(&length), sizeof length);
  out.write(reinterpret_cast<const char*>(f.values.data()),
            static_cast<std::streamsize>(n * sizeof(double)));
  if (!out) throw IoError("write failed: " + path.string());
}

spectral::Field read_field_binary(const std::filesystem::path& path) {
  auto in = open_in(path, std::ios::binary);
  std::uint64_t n = 0;
  double length = 0.0;
  in.read(reinterpret_cast<char*>(&n), sizeof n);
  in.read(reinterpret_cast<char*>(&length), sizeof length);
  if (!in || n == 0 || n > (std::uint64_t{1} << 32)) throw IoError("bad binary field header: " + path.string());
  std::vector<double> values(n);
  in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(n * sizeof(double)));
  if (!in) throw IoError("truncated binary field: " + path.string());
  try {
    return spectral::Field(spectral::Grid(n, length), std::move(values));
  } catch (const InvalidArgument& e) {
    throw IoError(std::string("binary field grid: ") + e.what());
  }
}

}  // namespace frontlab::io
