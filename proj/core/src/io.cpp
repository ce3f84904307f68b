#include "wstat/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "wstat/errors.hpp"

namespace wstat::io {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\"");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\"");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::string_view rest(line);
  for (;;) {
    const auto comma = rest.find(',');
    fields.push_back(trim(rest.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return fields;
}

std::optional<double> parse_number(const std::string& field) {
  if (field.empty()) return std::nullopt;
  const char* begin = field.data();
  if (*begin == '+') ++begin;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(begin, field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) return std::nullopt;
  return value;
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;
};

Table read_table(std::istream& in) {
  Table t;
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;
    auto fields = split(line);
    if (first) {
      first = false;
      const bool header = std::none_of(fields.begin(), fields.end(),
                                       [](const std::string& f) { return parse_number(f).has_value(); });
      if (header) {
        t.header = std::move(fields);
        continue;
      }
    }
    t.rows.push_back(std::move(fields));
    t.line_numbers.push_back(line_no);
  }
  return t;
}

std::ifstream open(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  return in;
}

}  // namespace

ColumnSelector ColumnSelector::parse(const std::string& text) {
  ColumnSelector sel;
  if (text.empty()) return sel;
  if (std::all_of(text.begin(), text.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    sel.index = static_cast<std::size_t>(std::stoull(text));
  } else {
    sel.name = text;
  }
  return sel;
}

std::vector<double> read_numeric_column(std::istream& in, const ColumnSelector& column) {
  const Table table = read_table(in);
  if (table.rows.empty()) throw ParseError("no data rows");

  std::size_t col = 0;
  if (column.name) {
    const auto it = std::find(table.header.begin(), table.header.end(), *column.name);
    if (it == table.header.end()) throw ParseError("no column named '" + *column.name + "'");
    col = static_cast<std::size_t>(it - table.header.begin());
  } else if (column.index) {
    col = *column.index;
  } else {
    const auto& row = table.rows.front();
    const auto it = std::find_if(row.begin(), row.end(),
                                 [](const std::string& f) { return parse_number(f).has_value(); });
    if (it == row.end()) throw ParseError("no numeric column");
    col = static_cast<std::size_t>(it - row.begin());
  }

  std::vector<double> values;
  values.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    std::ostringstream where;
    where << "line " << table.line_numbers[r] << ", column " << col;
    if (col >= row.size()) throw ParseError(where.str() + ": missing field");
    const auto v = parse_number(row[col]);
    if (!v) throw ParseError(where.str() + ": '" + row[col] + "' is not numeric");
    if (!std::isfinite(*v)) throw ParseError(where.str() + ": value is not finite");
    values.push_back(*v);
  }
  return values;
}

std::vector<double> read_numeric_column(const std::filesystem::path& path,
                                        const ColumnSelector& column) {
  auto in = open(path);
  return read_numeric_column(in, column);
}

OrderedSample read_sample_csv(const std::filesystem::path& path, const ColumnSelector& column) {
  return OrderedSample(read_numeric_column(path, column));
}

TabulatedPdf read_tabulated_pdf(std::istream& in) {
  const Table table = read_table(in);
  if (table.rows.size() < 2) throw ParseError("tabulated pdf needs at least two rows");
  TabulatedPdf pdf;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    std::ostringstream where;
    where << "line " << table.line_numbers[r];
    if (row.size() < 2) throw ParseError(where.str() + ": expected two columns (z, f)");
    const auto z = parse_number(row[0]);
    const auto f = parse_number(row[1]);
    if (!z || !f || !std::isfinite(*z) || !std::isfinite(*f)) {
      throw ParseError(where.str() + ": non-numeric or non-finite entry");
    }
    pdf.z.push_back(*z);
    pdf.f.push_back(*f);
  }
  return pdf;
}

TabulatedPdf read_tabulated_pdf(const std::filesystem::path& path) {
  auto in = open(path);
  return read_tabulated_pdf(in);
}

StandardDensity load_tabulated_density(const std::filesystem::path& path) {
  const TabulatedPdf table = read_tabulated_pdf(path);
  CustomOptions opt;
  opt.name = "tabulated";
  return make_tabulated(table.z, table.f, opt);
}

}  // namespace wstat::io
