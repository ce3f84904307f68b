#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "wstat/densities.hpp"
#include "wstat/transport.hpp"

namespace wstat::io {

/// Column by header name or zero-based index. Empty selects the first
/// column whose first data row is numeric.
struct ColumnSelector {
  std::optional<std::string> name;
  std::optional<std::size_t> index;

  /// All-digit strings are indices, anything else a header name.
  static ColumnSelector parse(const std::string& text);
};

/// Reads one numeric column from CSV text. A first row with no
/// numeric field is taken as a header. Blank lines and lines starting
/// with '#' are skipped. Throws ParseError when the column is missing,
/// contains a non-numeric or non-finite value, or no rows remain.
std::vector<double> read_numeric_column(std::istream& in, const ColumnSelector& column = {});
std::vector<double> read_numeric_column(const std::filesystem::path& path,
                                        const ColumnSelector& column = {});

OrderedSample read_sample_csv(const std::filesystem::path& path, const ColumnSelector& column = {});

struct TabulatedPdf {
  std::vector<double> z;
  std::vector<double> f;
};

/// Two numeric columns (z, f(z)), optional header.
TabulatedPdf read_tabulated_pdf(std::istream& in);
TabulatedPdf read_tabulated_pdf(const std::filesystem::path& path);

/// Linear interpolation of the table, standardized to mean 0, variance 1.
StandardDensity load_tabulated_density(const std::filesystem::path& path);

}  // namespace wstat::io
