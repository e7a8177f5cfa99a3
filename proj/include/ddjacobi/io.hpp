#pragma once

// File formats (Matrix Market, dense CSV matrices, point CSV, sweep
// history CSV) and the deterministic test-matrix generators.
//
// All indices in files are 1-based. Reals are written in shortest
// round-trip form, so write-then-read is lossless.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "ddjacobi/solver.hpp"
#include "ddjacobi/spectral.hpp"
#include "ddjacobi/sym_matrix.hpp"

namespace ddjacobi::io {

inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

inline std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

inline std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::vector<std::string_view> tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

inline std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

/// Accepts a general square matrix that is symmetric to within
/// 4*eps*max|a_ij|; the lower triangle wins.
inline SymMatrix from_general(std::size_t n, std::vector<double> a) {
  double maxabs = 0.0;
  for (double v : a) maxabs = std::max(maxabs, std::abs(v));
  const double slack = 4.0 * kEps * maxabs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) {
      if (std::abs(a[i * n + j] - a[j * n + i]) > slack)
        throw Error(Errc::NotSymmetric, "entries (" + std::to_string(i + 1) + "," +
                                            std::to_string(j + 1) + ") and transpose differ");
      a[j * n + i] = a[i * n + j];
    }
  return SymMatrix::from_dense(n, a);
}

[[noreturn]] inline void parse_error(std::size_t line_no, const std::string& what) {
  throw Error(Errc::ParseError, "line " + std::to_string(line_no) + ": " + what);
}

inline std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
  return in;
}

inline std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
  return out;
}

inline std::size_t parse_index(std::string_view s, std::size_t n, std::size_t line_no) {
  std::size_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    parse_error(line_no, "bad index '" + std::string(s) + "'");
  if (v < 1 || v > n) parse_error(line_no, "index " + std::string(s) + " out of range");
  return v - 1;
}

}  // namespace detail

/// Matrix Market reader for real/integer/pattern matrices stored as
/// coordinate or array, symmetric or general. General matrices must be
/// symmetric to within 4*eps*max|a_ij|.
inline SymMatrix read_matrix_market(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) detail::parse_error(line_no, "empty input");
  const auto head = detail::tokens(line);
  if (head.size() != 5 || detail::lower(head[0]) != "%%matrixmarket" ||
      detail::lower(head[1]) != "matrix")
    detail::parse_error(line_no, "missing %%MatrixMarket matrix header");
  const std::string format = detail::lower(head[2]);
  const std::string field = detail::lower(head[3]);
  const std::string symmetry = detail::lower(head[4]);
  if (format != "coordinate" && format != "array")
    detail::parse_error(line_no, "unknown format '" + format + "'");
  if (field == "complex") throw Error(Errc::UnsupportedField, "complex matrices are not supported");
  if (field != "real" && field != "integer" && field != "double" && field != "pattern")
    detail::parse_error(line_no, "unknown field '" + field + "'");
  if (symmetry == "hermitian" || symmetry == "skew-symmetric")
    throw Error(Errc::UnsupportedField, symmetry + " storage is not supported");
  if (symmetry != "symmetric" && symmetry != "general")
    detail::parse_error(line_no, "unknown symmetry '" + symmetry + "'");
  if (format == "array" && field == "pattern")
    detail::parse_error(line_no, "pattern field requires coordinate format");
  const bool sym = symmetry == "symmetric";
  const bool pattern = field == "pattern";

  auto next_data_line = [&](std::string& out) {
    while (std::getline(in, out)) {
      ++line_no;
      const auto t = detail::trim(out);
      if (t.empty() || t.front() == '%') continue;
      return true;
    }
    return false;
  };

  if (!next_data_line(line)) detail::parse_error(line_no, "missing size line");
  const auto size_tok = detail::tokens(line);
  auto to_count = [&](std::string_view s) {
    std::size_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
      detail::parse_error(line_no, "bad size '" + std::string(s) + "'");
    return v;
  };
  if (size_tok.size() != (format == "coordinate" ? 3u : 2u))
    detail::parse_error(line_no, "bad size line");
  const std::size_t rows = to_count(size_tok[0]);
  const std::size_t cols = to_count(size_tok[1]);
  if (rows != cols || rows == 0) throw Error(Errc::NotSymmetric, "matrix is not square");
  const std::size_t n = rows;

  std::vector<double> a(n * n, 0.0);
  auto value_of = [&](std::string_view s) {
    const auto v = detail::parse_double(s);
    if (!v) detail::parse_error(line_no, "bad value '" + std::string(s) + "'");
    if (!std::isfinite(*v)) detail::parse_error(line_no, "non-finite value");
    return *v;
  };

  if (format == "coordinate") {
    const std::size_t nnz = to_count(size_tok[2]);
    for (std::size_t k = 0; k < nnz; ++k) {
      if (!next_data_line(line)) detail::parse_error(line_no, "expected " + std::to_string(nnz) + " entries");
      const auto tok = detail::tokens(line);
      if (tok.size() != (pattern ? 2u : 3u)) detail::parse_error(line_no, "bad entry line");
      const std::size_t i = detail::parse_index(tok[0], n, line_no);
      const std::size_t j = detail::parse_index(tok[1], n, line_no);
      const double v = pattern ? 1.0 : value_of(tok[2]);
      a[i * n + j] = v;
      if (sym) a[j * n + i] = v;
    }
  } else {
    // Column-major; symmetric arrays hold the lower triangle only.
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = sym ? j : 0; i < n; ++i) {
        if (!next_data_line(line)) detail::parse_error(line_no, "too few array entries");
        const auto tok = detail::tokens(line);
        if (tok.size() != 1) detail::parse_error(line_no, "bad array entry");
        const double v = value_of(tok[0]);
        a[i * n + j] = v;
        if (sym) a[j * n + i] = v;
      }
  }

  if (!sym) return detail::from_general(n, a);
  return SymMatrix::from_dense(n, a);
}

inline SymMatrix read_matrix_market(const std::filesystem::path& path) {
  auto in = detail::open_in(path);
  return read_matrix_market(in);
}

/// Writes `coordinate real symmetric`, lower triangle, skipping +0.0 entries.
inline void write_matrix_market(std::ostream& out, const SymMatrix& a) {
  const std::size_t n = a.size();
  auto keep = [](double v) { return v != 0.0 || std::signbit(v); };
  std::size_t nnz = 0;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = j; i < n; ++i) nnz += keep(a(i, j));
  out << "%%MatrixMarket matrix coordinate real symmetric\n";
  out << n << ' ' << n << ' ' << nnz << '\n';
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = j; i < n; ++i)
      if (keep(a(i, j))) out << i + 1 << ' ' << j + 1 << ' ' << format_double(a(i, j)) << '\n';
}

inline void write_matrix_market(const std::filesystem::path& path, const SymMatrix& a) {
  auto out = detail::open_out(path);
  write_matrix_market(out, a);
  if (!out) throw Error(Errc::IoError, "write failed: " + path.string());
}

namespace detail {

/// Comma-separated numeric grid; a non-numeric first row is a header.
struct CsvGrid {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;
  bool had_header = false;
};

inline CsvGrid read_csv_grid(std::istream& in) {
  CsvGrid g;
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty()) continue;
    const auto cells = split(t, ',');
    std::vector<double> row;
    row.reserve(cells.size());
    bool numeric = true;
    for (auto c : cells) {
      const auto v = parse_double(c);
      if (!v) {
        numeric = false;
        break;
      }
      row.push_back(*v);
    }
    if (!numeric) {
      if (first) {
        first = false;
        g.had_header = true;
        continue;
      }
      parse_error(line_no, "non-numeric cell");
    }
    first = false;
    if (g.rows == 0) g.cols = row.size();
    if (row.size() != g.cols)
      parse_error(line_no, "expected " + std::to_string(g.cols) + " columns, got " +
                               std::to_string(row.size()));
    g.values.insert(g.values.end(), row.begin(), row.end());
    ++g.rows;
  }
  return g;
}

}  // namespace detail

inline PointCloud read_points_csv(std::istream& in) {
  auto g = detail::read_csv_grid(in);
  return PointCloud(g.rows, g.cols, std::move(g.values));
}

inline PointCloud read_points_csv(const std::filesystem::path& path) {
  auto in = detail::open_in(path);
  return read_points_csv(in);
}

/// Square numeric CSV grid, checked for symmetry like `general` Matrix Market input.
inline SymMatrix read_dense_csv(std::istream& in) {
  const auto g = detail::read_csv_grid(in);
  if (g.rows == 0 || g.rows != g.cols) throw Error(Errc::NotSymmetric, "CSV matrix is not square");
  for (double v : g.values)
    if (!std::isfinite(v)) throw Error(Errc::ParseError, "non-finite value");
  return detail::from_general(g.rows, g.values);
}

/// Dispatches on extension: `.csv` is a dense grid, anything else Matrix Market.
inline SymMatrix read_matrix(const std::filesystem::path& path) {
  auto in = detail::open_in(path);
  if (detail::lower(path.extension().string()) == ".csv") return read_dense_csv(in);
  return read_matrix_market(in);
}

struct HistoryRow {
  std::size_t sweep = 0;
  double off_row_m = 0.0;
  double off_total = 0.0;
  double a_mm = 0.0;
  std::optional<double> alpha;
  std::optional<double> err_vs_ref;

  friend bool operator==(const HistoryRow&, const HistoryRow&) = default;
};

inline constexpr std::string_view kHistoryHeader = "sweep,off_row_m,off_total,a_mm,alpha,err_vs_ref";

/// err_vs_ref = |a_mm - reference| when a reference eigenvalue is given.
inline std::vector<HistoryRow> history_rows(const EigenpairResult& r,
                                            std::optional<double> reference = std::nullopt) {
  std::vector<HistoryRow> rows;
  rows.reserve(r.history.size());
  for (const auto& h : r.history) {
    HistoryRow row{h.sweep, h.off_row_m, h.off_total, h.a_mm, h.alpha, std::nullopt};
    if (reference) row.err_vs_ref = std::abs(h.a_mm - *reference);
    rows.push_back(row);
  }
  return rows;
}

inline void write_history_csv(std::ostream& out, std::span<const HistoryRow> rows) {
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  out << kHistoryHeader << '\n';
  for (const auto& r : rows)
    out << r.sweep << ',' << format_double(r.off_row_m) << ',' << format_double(r.off_total) << ','
        << format_double(r.a_mm) << ',' << opt(r.alpha) << ',' << opt(r.err_vs_ref) << '\n';
}

inline void write_history_csv(const std::filesystem::path& path, std::span<const HistoryRow> rows) {
  auto out = detail::open_out(path);
  write_history_csv(out, rows);
  if (!out) throw Error(Errc::IoError, "write failed: " + path.string());
}

inline std::vector<HistoryRow> read_history_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line) || detail::trim(line) != kHistoryHeader)
    detail::parse_error(line_no, "missing history header");
  std::vector<HistoryRow> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const auto cells = detail::split(detail::trim(line), ',');
    if (cells.size() != 6) detail::parse_error(line_no, "expected 6 columns");
    auto req = [&](std::string_view c) {
      const auto v = detail::parse_double(c);
      if (!v) detail::parse_error(line_no, "bad value '" + std::string(c) + "'");
      return *v;
    };
    auto opt = [&](std::string_view c) -> std::optional<double> {
      if (detail::trim(c).empty()) return std::nullopt;
      return req(c);
    };
    HistoryRow r;
    std::size_t sweep = 0;
    const auto res = std::from_chars(cells[0].data(), cells[0].data() + cells[0].size(), sweep);
    if (res.ec != std::errc() || res.ptr != cells[0].data() + cells[0].size())
      detail::parse_error(line_no, "bad sweep index");
    r.sweep = sweep;
    r.off_row_m = req(cells[1]);
    r.off_total = req(cells[2]);
    r.a_mm = req(cells[3]);
    r.alpha = opt(cells[4]);
    r.err_vs_ref = opt(cells[5]);
    rows.push_back(r);
  }
  return rows;
}

inline std::vector<HistoryRow> read_history_csv(const std::filesystem::path& path) {
  auto in = detail::open_in(path);
  return read_history_csv(in);
}

// ---------------------------------------------------------------------------
// Generators

/// 11x11: a_ii = i, a_ij = 1/100 when exactly one index is 6, else 1/121.
inline SymMatrix gen_example1() {
  constexpr std::size_t n = 11;
  constexpr std::size_t six = 5;
  SymMatrix a(n);
  for (std::size_t i = 0; i < n; ++i) {
    a.set(i, i, static_cast<double>(i + 1));
    for (std::size_t j = 0; j < i; ++j) a.set(i, j, (i == six || j == six) ? 1.0 / 100.0 : 1.0 / 121.0);
  }
  return a;
}

/// diag(1 + x_i) + sigma u u^T, x_i = i h, h = 1/(n+1), u_i = sin(sqrt(2) pi x_i), sigma = 1/n.
inline SymMatrix gen_diag_rank1(std::size_t n) {
  if (n < 2) throw Error(Errc::InvalidArgument, "diag-plus-rank-one needs n >= 2");
  const double h = 1.0 / static_cast<double>(n + 1);
  const double sigma = 1.0 / static_cast<double>(n);
  std::vector<double> x(n), u(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = static_cast<double>(i + 1) * h;
    u[i] = std::sin(std::numbers::sqrt2 * std::numbers::pi * x[i]);
  }
  std::vector<double> a(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i * n + j] = sigma * u[i] * u[j] + (i == j ? 1.0 + x[i] : 0.0);
  return SymMatrix::from_dense(n, a);
}

/// Diagonal 1..n plus a uniform(-1, 1) symmetric off-diagonal part,
/// rescaled so that off(H) equals alpha_target. Deterministic per seed.
inline SymMatrix gen_random_dd(std::size_t n, double alpha_target, std::uint64_t seed) {
  if (n < 2) throw Error(Errc::InvalidArgument, "need n >= 2");
  if (!(alpha_target > 0.0 && alpha_target < 1.0))
    throw Error(Errc::InvalidArgument, "alpha_target must lie in (0, 1)");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> off(n * n, 0.0);
  double h2 = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) {
      const double v = dist(rng);
      off[i * n + j] = v;
      h2 += 2.0 * v * v / (static_cast<double>(i + 1) * static_cast<double>(j + 1));
    }
  const double scale = alpha_target / std::sqrt(h2);
  SymMatrix a(n);
  for (std::size_t i = 0; i < n; ++i) {
    a.set(i, i, static_cast<double>(i + 1));
    for (std::size_t j = 0; j < i; ++j) a.set(i, j, off[i * n + j] * scale);
  }
  return a;
}

}  // namespace ddjacobi::io
