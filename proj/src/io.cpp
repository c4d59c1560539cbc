#include "openq/io.hpp"

#include <charconv>
#include <cstdio>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace openq {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(std::ostream& os, std::vector<std::string> columns)
    : os_(os), width_(columns.size()) {
  for (std::size_t i = 0; i < columns.size(); ++i) os_ << (i ? "," : "") << columns[i];
  os_ << '\n';
}

void CsvWriter::row(std::initializer_list<double> values) { row(std::vector<double>(values)); }

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != width_) throw Error(ErrorCode::shape_mismatch, "CSV row width");
  for (std::size_t i = 0; i < values.size(); ++i) os_ << (i ? "," : "") << format_double(values[i]);
  os_ << '\n';
}

void write_snapshot(std::ostream& os, const DensityOperatorGrid& rho, const PhysicalParams& p) {
  os << "# openq-snapshot v1\n";
  os << "# t " << format_double(rho.time) << '\n';
  os << "# grid_x " << rho.x.size() << ' ' << format_double(rho.x.length()) << '\n';
  os << "# grid_xd " << rho.xd.size() << ' ' << format_double(rho.xd.length()) << '\n';
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(params_hash(p)));
  os << "# params_hash " << hash << '\n';
  for (std::size_t i = 0; i < rho.x.size(); ++i) {
    for (std::size_t j = 0; j < rho.xd.size(); ++j) {
      const cplx v = rho.at(i, j);
      os << (j ? " " : "") << format_double(v.real()) << ' ' << format_double(v.imag());
    }
    os << '\n';
  }
}

namespace {

std::string expect_header(std::istream& is, const std::string& key) {
  std::string line;
  if (!std::getline(is, line)) throw Error(ErrorCode::config_parse, "snapshot truncated");
  const std::string prefix = "# " + key;
  if (line.rfind(prefix, 0) != 0) {
    throw Error(ErrorCode::config_parse, "snapshot: expected '" + prefix + "', got '" + line + "'");
  }
  return line.substr(prefix.size());
}

}  // namespace

Snapshot read_snapshot(std::istream& is) {
  if (expect_header(is, "openq-snapshot") != " v1") {
    throw Error(ErrorCode::config_parse, "unsupported snapshot version");
  }
  const double t = std::stod(expect_header(is, "t"));
  std::size_t nx = 0, nxd = 0;
  double lx = 0.0, lxd = 0.0;
  std::istringstream(expect_header(is, "grid_x")) >> nx >> lx;
  std::istringstream(expect_header(is, "grid_xd")) >> nxd >> lxd;
  const std::string hash_text = expect_header(is, "params_hash");
  const std::uint64_t hash = std::stoull(hash_text, nullptr, 16);
  DensityOperatorGrid rho(Grid(nx, lx), Grid(nxd, lxd));
  rho.time = t;
  for (auto& v : rho.values) {
    double re = 0.0, im = 0.0;
    if (!(is >> re >> im)) throw Error(ErrorCode::config_parse, "snapshot payload truncated");
    v = cplx(re, im);
  }
  return {std::move(rho), hash};
}

void write_diagnostics(std::ostream& os, const std::vector<DiagnosticsRow>& rows) {
  CsvWriter csv(os, {"t", "norm", "residual", "edge_magnitude"});
  for (const auto& r : rows) csv.row({r.t, r.norm, r.residual, r.edge_magnitude});
}

}  // namespace openq
