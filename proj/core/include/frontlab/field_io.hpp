#ifndef FRONTLAB_FIELD_IO_HPP_
#define FRONTLAB_FIELD_IO_HPP_

// Field persistence.
//   CSV:    header "x,value", one row per grid point, 17 significant digits.
//   Binary: uint64 N, float64 L, then N float64 values; all little-endian.

#include <filesystem>
#include <string>
#include <vector>

#include "frontlab/spectral.hpp"

namespace frontlab::io {

void write_field_csv(const std::filesystem::path& path, const spectral::Field& f);
spectral::Field read_field_csv(const std::filesystem::path& path);

void write_field_binary(const std::filesystem::path& path, const spectral::Field& f);
spectral::Field read_field_binary(const std::filesystem::path& path);

// Generic CSV with named columns of equal length.
void write_columns_csv(const std::filesystem::path& path,
                       const std::vector<std::string>& names,
                       const std::vector<std::vector<double>>& columns);

struct CsvTable {
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;

  // Column by header name; throws IoError if absent.
  const std::vector<double>& column(const std::string& name) const;
  bool has(const std::string& name) const;
};

CsvTable read_columns_csv(const std::filesystem::path& path);

// Full-precision decimal text (shortest round-trip form).
std::string format_double(double v);

}  // namespace frontlab::io

#endif  // FRONTLAB_FIELD_IO_HPP_
