#ifndef GAUSSFIT_CSV_HPP
#define GAUSSFIT_CSV_HPP

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "gaussfit/erf_table.hpp"
#include "gaussfit/error.hpp"
#include "gaussfit/signal.hpp"

namespace gaussfit {

/// Decimal with 17 significant digits; round-trips any double.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(',', start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline FitError parse_error(std::size_t line_no, const std::string& what) {
  return FitError(Errc::ParseError, "line " + std::to_string(line_no) + ": " + what);
}

inline double parse_double(std::string_view field, std::size_t line_no) {
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(value)) {
    throw parse_error(line_no, "not a finite number: '" + std::string(field) + "'");
  }
  return value;
}

/// Reads a headed CSV with exactly two numeric columns.
inline std::vector<std::pair<double, double>> read_two_columns(std::istream& in,
                                                                std::string_view header) {
  std::string line;
  std::size_t line_no = 0;
  bool seen_header = false;
  std::vector<std::pair<double, double>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    const auto view = trim(line);
    if (view.empty()) continue;
    if (!seen_header) {
      if (view != header) {
        throw parse_error(line_no, "expected header '" + std::string(header) + "'");
      }
      seen_header = true;
      continue;
    }
    const auto fields = split_commas(view);
    if (fields.size() != 2) throw parse_error(line_no, "expected 2 columns");
    rows.emplace_back(parse_double(fields[0], line_no), parse_double(fields[1], line_no));
  }
  if (!seen_header) throw parse_error(line_no, "missing header");
  return rows;
}

}  // namespace detail

inline SampledSignal read_signal_csv(std::istream& in) {
  const auto rows = detail::read_two_columns(in, "x,y");
  if (rows.size() < 3) {
    throw FitError(Errc::ParseError, "signal needs at least 3 rows, got " + std::to_string(rows.size()));
  }
  const double x0 = rows[0].first;
  const double dx = rows[1].first - rows[0].first;
  if (!(dx > 0.0)) throw detail::parse_error(3, "x must be strictly increasing");
  std::vector<double> y;
  y.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0 && std::abs((rows[i].first - rows[i - 1].first) - dx) > 1e-9 * dx) {
      throw detail::parse_error(i + 2, "non-uniform spacing in x");
    }
    y.push_back(rows[i].second);
  }
  return SampledSignal(std::move(y), dx, x0);
}

inline SampledSignal read_signal_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FitError(Errc::ParseError, "cannot open " + path);
  return read_signal_csv(in);
}

inline void write_signal_csv(std::ostream& out, const SampledSignal& signal) {
  out << "x,y\n";
  for (std::size_t n = 0; n < signal.size(); ++n) {
    out << format_double(signal.x(n)) << ',' << format_double(signal[n]) << '\n';
  }
}

inline void write_signal_csv(const std::string& path, const SampledSignal& signal) {
  std::ofstream out(path);
  if (!out) throw FitError(Errc::ParseError, "cannot write " + path);
  write_signal_csv(out, signal);
}

inline void write_erf_table_csv(std::ostream& out, const ErfTable& table) {
  out << "k,erf_k_over_sqrt2\n";
  for (std::size_t j = 0; j < table.size(); ++j) {
    out << format_double(table.k(j)) << ',' << format_double(table.value(j)) << '\n';
  }
}

inline void write_erf_table_csv(const std::string& path, const ErfTable& table) {
  std::ofstream out(path);
  if (!out) throw FitError(Errc::ParseError, "cannot write " + path);
  write_erf_table_csv(out, table);
}

inline ErfTable read_erf_table_csv(std::istream& in) {
  const auto rows = detail::read_two_columns(in, "k,erf_k_over_sqrt2");
  std::vector<double> ks;
  std::vector<double> values;
  for (const auto& [k, v] : rows) {
    ks.push_back(k);
    values.push_back(v);
  }
  try {
    return ErfTable(std::move(ks), std::move(values));
  } catch (const FitError& e) {
    throw FitError(Errc::ParseError, e.what());
  }
}

inline ErfTable read_erf_table_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FitError(Errc::ParseError, "cannot open " + path);
  return read_erf_table_csv(in);
}

}  // namespace gaussfit

#endif  // GAUSSFIT_CSV_HPP
