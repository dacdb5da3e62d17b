#include "subcorr/io.hpp"

#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace subcorr {
namespace io {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw std::runtime_error(path + ": " + what);
}

[[noreturn]] void fail_io(const std::string& path, const std::string& what) {
  throw IoError(path + ": " + what);
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail_io(path, "cannot open for reading");
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) fail_io(path, "cannot open for writing");
  return out;
}

void strip_comment(std::string& line) {
  const auto pos = line.find('#');
  if (pos != std::string::npos) line.erase(pos);
}

bool blank(const std::string& s) {
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  return true;
}

double parse_number(const std::string& tok, const std::string& path) {
  // strtod instead of stod: subnormals set ERANGE, which stod turns into a
  // throw, but they are perfectly good doubles.
  errno = 0;
  char* end = nullptr;
  const double x = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str()) fail(path, "not a number: '" + tok + "'");
  if (errno == ERANGE && (x == HUGE_VAL || x == -HUGE_VAL))
    fail(path, "number out of range: '" + tok + "'");
  while (*end != '\0' && std::isspace(static_cast<unsigned char>(*end))) ++end;
  if (*end != '\0') fail(path, "trailing junk after number: '" + tok + "'");
  return x;
}

void append_row(const std::string& line, const std::string& path, std::vector<double>& out) {
  std::stringstream ss(line);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (blank(tok)) fail(path, "empty field");
    out.push_back(parse_number(tok, path));
  }
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

} // namespace

std::vector<double> read_vector_csv(const std::string& path) {
  std::ifstream in = open_in(path);
  std::vector<double> v;
  std::string line;
  while (std::getline(in, line)) {
    strip_comment(line);
    if (blank(line)) continue;
    const std::size_t before = v.size();
    append_row(line, path, v);
    if (v.size() != before + 1) fail(path, "expected one value per line");
  }
  if (v.empty()) fail(path, "no values");
  return v;
}

void write_vector_csv(const std::string& path, const std::vector<double>& v) {
  std::ofstream out = open_out(path);
  for (double x : v) out << fmt(x) << '\n';
  if (!out) fail_io(path, "write error");
}

DenseCsv read_dense_csv(const std::string& path) {
  std::ifstream in = open_in(path);
  DenseCsv m;
  std::string line;
  while (std::getline(in, line)) {
    strip_comment(line);
    if (blank(line)) continue;
    const std::size_t before = m.values.size();
    append_row(line, path, m.values);
    const int width = static_cast<int>(m.values.size() - before);
    if (m.rows == 0) {
      m.cols = width;
    } else if (width != m.cols) {
      fail(path, "ragged rows");
    }
    ++m.rows;
  }
  if (m.rows == 0) fail(path, "no values");
  return m;
}

void write_dense_csv(const std::string& path, int rows, int cols,
                     const std::vector<double>& values) {
  if (static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols) != values.size())
    fail(path, "size mismatch");
  std::ofstream out = open_out(path);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      if (j) out << ',';
      out << fmt(values[static_cast<std::size_t>(i) * cols + j]);
    }
    out << '\n';
  }
  if (!out) fail_io(path, "write error");
}

GridFunction read_grid_csv(const std::string& path) {
  DenseCsv m = read_dense_csv(path);
  GridFunction g(Shape::image(m.rows, m.cols));
  g.v = std::move(m.values);
  return g;
}

void write_grid_csv(const std::string& path, const GridFunction& g) {
  write_dense_csv(path, g.shape.rows, g.shape.cols, g.v);
}

GridFunction read_pgm(const std::string& path) {
  std::ifstream in = open_in(path);
  // Token stream with '#' comments, per the format.
  auto next = [&]() -> std::string {
    std::string tok;
    while (in >> tok) {
      if (tok[0] == '#') {
        std::string rest;
        std::getline(in, rest);
        continue;
      }
      return tok;
    }
    fail(path, "truncated file");
  };
  if (next() != "P2") fail(path, "expected plain-text P2 header");
  const int cols = static_cast<int>(parse_number(next(), path));
  const int rows = static_cast<int>(parse_number(next(), path));
  const double maxval = parse_number(next(), path);
  if (cols < 1 || rows < 1 || maxval <= 0.0) fail(path, "bad header");
  GridFunction g(Shape::image(rows, cols));
  for (double& x : g.v) x = parse_number(next(), path) / maxval;
  return g;
}

void write_pgm(const std::string& path, const GridFunction& g) {
  if (g.shape.ndim != 2) fail(path, "need a 2-D grid");
  std::ofstream out = open_out(path);
  out << "P2\n" << g.shape.cols << ' ' << g.shape.rows << "\n255\n";
  for (int i = 0; i < g.shape.rows; ++i) {
    for (int j = 0; j < g.shape.cols; ++j) {
      double x = g.at(i, j);
      if (x < 0.0) x = 0.0;
      if (x > 1.0) x = 1.0;
      if (j) out << ' ';
      out << static_cast<int>(std::lround(x * 255.0));
    }
    out << '\n';
  }
  if (!out) fail_io(path, "write error");
}

void write_trace_csv(const std::string& path, const std::vector<TraceRow>& trace,
                     bool include_timing) {
  std::ofstream out = open_out(path);
  out << (include_timing ? "iter,energy,increment,seconds" : "iter,energy,increment") << '\n';
  for (const TraceRow& r : trace) {
    out << r.iter << ',' << fmt(r.energy) << ',' << fmt(r.increment);
    if (include_timing) out << ',' << fmt(r.seconds);
    out << '\n';
  }
  if (!out) fail_io(path, "write error");
}

} // namespace io
} // namespace subcorr
