#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "subcorr/grid.hpp"
#include "subcorr/solvers.hpp"

namespace subcorr {
namespace io {

/// Filesystem-level failure (cannot open, cannot write). Malformed content
/// throws plain std::runtime_error instead.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One value per line. Blank lines are skipped; anything after '#' is a comment.
std::vector<double> read_vector_csv(const std::string& path);
void write_vector_csv(const std::string& path, const std::vector<double>& v);

struct DenseCsv {
  int rows = 0;
  int cols = 0;
  std::vector<double> values;  // row-major
};

/// Comma-separated values, one matrix row per line, no header.
DenseCsv read_dense_csv(const std::string& path);
void write_dense_csv(const std::string& path, int rows, int cols,
                     const std::vector<double>& values);

GridFunction read_grid_csv(const std::string& path);
void write_grid_csv(const std::string& path, const GridFunction& g);

/// Plain-text PGM (P2), maxval 255. Pixels map to [0,1] on read; values are
/// clamped to [0,1] and rounded on write. Writing through PGM quantizes, so
/// the CSV forms above are the lossless route.
GridFunction read_pgm(const std::string& path);
void write_pgm(const std::string& path, const GridFunction& g);

void write_trace_csv(const std::string& path, const std::vector<TraceRow>& trace,
                     bool include_timing);

} // namespace io
} // namespace subcorr
