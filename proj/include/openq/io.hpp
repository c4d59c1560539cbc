#pragma once

#include <initializer_list>
#include <iosfwd>
#include <string>
#include <vector>

#include "openq/domain.hpp"

namespace openq {

/// Comma-separated rows, doubles written with 17 significant digits so that
/// they round-trip exactly.
class CsvWriter {
 public:
  CsvWriter(std::ostream& os, std::vector<std::string> columns);

  void row(std::initializer_list<double> values);
  void row(const std::vector<double>& values);

 private:
  std::ostream& os_;
  std::size_t width_;
};

std::string format_double(double v);

/// Text snapshot of a density grid:
///   # openq-snapshot v1
///   # t <t>
///   # grid_x <n> <length>
///   # grid_xd <n> <length>
///   # params_hash <16 hex digits>
/// followed by one line per x row holding n_xd "re im" pairs.
void write_snapshot(std::ostream& os, const DensityOperatorGrid& rho, const PhysicalParams& p);

struct Snapshot {
  DensityOperatorGrid rho;
  std::uint64_t params_hash;
};

Snapshot read_snapshot(std::istream& is);

struct DiagnosticsRow {
  double t;
  double norm;
  double residual;
  double edge_magnitude;
};

/// CSV with columns t,norm,residual,edge_magnitude.
void write_diagnostics(std::ostream& os, const std::vector<DiagnosticsRow>& rows);

}  // namespace openq
