#include "openq/domain.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <sstream>

namespace openq {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::non_positive_mass: return "NonPositiveMass";
    case ErrorCode::non_positive_hbar: return "NonPositiveHbar";
    case ErrorCode::negative_rate: return "NegativeRate";
    case ErrorCode::positivity_violation: return "PositivityViolation";
    case ErrorCode::zero_friction: return "ZeroFriction";
    case ErrorCode::domain_escape: return "DomainEscape";
    case ErrorCode::stability_violation: return "StabilityViolation";
    case ErrorCode::boundary_leak: return "BoundaryLeak";
    case ErrorCode::grid_mismatch: return "GridMismatch";
    case ErrorCode::zero_decoherence: return "ZeroDecoherence";
    case ErrorCode::zero_norm: return "ZeroNorm";
    case ErrorCode::fit_failure: return "FitFailure";
    case ErrorCode::invalid_label: return "InvalidLabel";
    case ErrorCode::shape_mismatch: return "ShapeMismatch";
    case ErrorCode::ill_posed: return "IllPosed";
    case ErrorCode::config_parse: return "ConfigParse";
  }
  return "Unknown";
}

namespace {

std::string describe_sides(double lhs, double rhs) {
  std::ostringstream os;
  os.precision(17);
  os << "m^2(nu^2+4xi^2) = " << lhs << " > 2 d0 d2 = " << rhs;
  return os.str();
}

}  // namespace

PositivityViolation::PositivityViolation(double lhs, double rhs)
    : Error(ErrorCode::positivity_violation, describe_sides(lhs, rhs)), lhs_(lhs), rhs_(rhs) {}

std::pair<double, double> PhysicalParams::positivity_sides() const {
  return {m * m * (nu * nu + 4.0 * xi * xi), 2.0 * d0 * d2};
}

PhysicalParams validate_params(const PhysicalParams& p, bool strict) {
  for (double v : {p.m, p.hbar, p.nu, p.xi, p.d0, p.d2, p.f}) {
    if (!std::isfinite(v)) throw Error(ErrorCode::invalid_argument, "non-finite parameter");
  }
  if (!(p.m > 0.0)) throw Error(ErrorCode::non_positive_mass, "m must be > 0");
  if (!(p.hbar > 0.0)) throw Error(ErrorCode::non_positive_hbar, "hbar must be > 0");
  if (p.nu < 0.0) throw Error(ErrorCode::negative_rate, "nu must be >= 0");
  if (p.d0 < 0.0) throw Error(ErrorCode::negative_rate, "d0 must be >= 0");
  if (p.d2 < 0.0) throw Error(ErrorCode::negative_rate, "d2 must be >= 0");
  if (strict) {
    const auto [lhs, rhs] = p.positivity_sides();
    if (lhs > rhs + 1e-12 * std::max(lhs, rhs)) throw PositivityViolation(lhs, rhs);
  }
  return p;
}

namespace {

double parse_double(const std::string& key, const std::string& text) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  while (first != last && std::isspace(static_cast<unsigned char>(*first))) ++first;
  while (last != first && std::isspace(static_cast<unsigned char>(last[-1]))) --last;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || first == last) {
    throw Error(ErrorCode::config_parse, "key '" + key + "': not a number: '" + text + "'");
  }
  return value;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw Error(ErrorCode::config_parse, "key '" + key + "': not a boolean: '" + text + "'");
}

}  // namespace

PhysicalParams params_from_config(const std::map<std::string, std::string>& section) {
  PhysicalParams p;
  bool strict = false;
  for (const auto& [key, value] : section) {
    if (key == "m") p.m = parse_double(key, value);
    else if (key == "hbar") p.hbar = parse_double(key, value);
    else if (key == "nu") p.nu = parse_double(key, value);
    else if (key == "xi") p.xi = parse_double(key, value);
    else if (key == "d0") p.d0 = parse_double(key, value);
    else if (key == "d2") p.d2 = parse_double(key, value);
    else if (key == "f") p.f = parse_double(key, value);
    else if (key == "strict_positivity") strict = parse_bool(key, value);
    else throw Error(ErrorCode::config_parse, "unknown parameter key '" + key + "'");
  }
  return validate_params(p, strict);
}

double drift_wavevector(const PhysicalParams& p) {
  if (p.nu == 0.0) throw Error(ErrorCode::zero_friction, "k_f = f/(hbar nu) needs nu > 0");
  return p.f / (p.hbar * p.nu);
}

double drift_velocity(const PhysicalParams& p) { return p.hbar * drift_wavevector(p) / p.m; }

double damping_coefficient(const PhysicalParams& p) {
  return (p.d0 + p.d2 * p.nu * p.nu - 2.0 * p.m * p.nu * p.xi) / (2.0 * p.hbar);
}

double decoherence_coefficient(const PhysicalParams& p) {
  if (p.nu == 0.0) throw Error(ErrorCode::zero_friction, "d needs nu > 0");
  return damping_coefficient(p) / p.nu;
}

std::uint64_t params_hash(const PhysicalParams& p) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (double v : {p.m, p.hbar, p.nu, p.xi, p.d0, p.d2, p.f}) {
    auto bits = std::bit_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) {
      h ^= (bits >> (8 * b)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

WaveVector::WaveVector(cplx value) : q(value) {
  if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
    throw Error(ErrorCode::invalid_argument, "wave vector must be finite");
  }
}

Grid::Grid(std::size_t n, double length) : n_(n), length_(length) {
  if (n < 8) throw Error(ErrorCode::invalid_argument, "grid needs at least 8 points");
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw Error(ErrorCode::invalid_argument, "grid length must be positive");
  }
}

std::vector<double> Grid::coordinates() const {
  std::vector<double> xs(n_);
  for (std::size_t i = 0; i < n_; ++i) xs[i] = coordinate(i);
  return xs;
}

ElementaryComponent::ElementaryComponent(WaveVector q_, Grid grid_, std::vector<cplx> chi_)
    : q(q_), grid(grid_), chi(std::move(chi_)) {
  if (chi.size() != grid.size()) throw Error(ErrorCode::grid_mismatch, "chi size != grid size");
}

bool ElementaryComponent::hermitian(double tol) const {
  double scale = 0.0;
  for (const auto& v : chi) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return true;
  for (std::size_t i = 0; i < chi.size(); ++i) {
    if (std::abs(chi[grid.reflect(i)] - std::conj(chi[i])) > tol * scale) return false;
  }
  return true;
}

DensityOperatorGrid::DensityOperatorGrid(Grid x_, Grid xd_)
    : x(x_), xd(xd_), values(x_.size() * xd_.size()) {}

DensityOperatorGrid::DensityOperatorGrid(Grid x_, Grid xd_, std::vector<cplx> values_, double time_)
    : x(x_), xd(xd_), values(std::move(values_)), time(time_) {
  if (values.size() != x.size() * xd.size()) {
    throw Error(ErrorCode::grid_mismatch, "density grid size mismatch");
  }
}

double DensityOperatorGrid::max_abs() const {
  double m = 0.0;
  for (const auto& v : values) m = std::max(m, std::abs(v));
  return m;
}

double DensityOperatorGrid::hermiticity_defect() const {
  const double scale = max_abs();
  if (scale == 0.0) return 0.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < xd.size(); ++j) {
      worst = std::max(worst, std::abs(at(i, xd.reflect(j)) - std::conj(at(i, j))));
    }
  }
  return worst / scale;
}

Classification classify_component(const ElementaryComponent& c, const Grid& box,
                                  double tol_factor) {
  const double length = box.length();
  const cplx q = c.q.q;
  // int_{-L/2}^{L/2} e^{iqx} dx = 2 sin(qL/2)/q
  cplx integral = std::abs(q) == 0.0 ? cplx(length) : 2.0 * std::sin(q * (length / 2.0)) / q;
  const cplx trace = integral * c.at_origin();
  double scale = 0.0;
  for (const auto& v : c.chi) scale = std::max(scale, std::abs(v));
  const bool first = std::abs(trace) > tol_factor * length * scale;
  return {first ? ComponentClass::first : ComponentClass::second, trace};
}

}  // namespace openq
