#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "openq/error.hpp"

namespace openq {

using cplx = std::complex<double>;

/// Coefficients of the harmonic translation-invariant master equation.
///
/// No unit system is imposed; hbar = m = 1 scaling is the intended use.
/// `xi` carries the dimensions forced term-by-term by the equation, i.e.
/// m*nu*xi has the dimensions of d0.
struct PhysicalParams {
  double m = 1.0;
  double hbar = 1.0;
  double nu = 0.0;
  double xi = 0.0;
  double d0 = 0.0;
  double d2 = 0.0;
  double f = 0.0;

  /// Lindblad positivity bound, both sides: {m^2(nu^2+4xi^2), 2 d0 d2}.
  std::pair<double, double> positivity_sides() const;

  bool operator==(const PhysicalParams&) const = default;
};

/// Checks the invariants of `p` and returns it unchanged. In strict mode the
/// positivity bound is enforced as well (boundary accepted to 1e-12 relative).
PhysicalParams validate_params(const PhysicalParams& p, bool strict);

/// Builds params from a flat key/value section (m, hbar, nu, xi, d0, d2, f,
/// strict_positivity). Unknown keys and malformed numbers are errors. The
/// result is validated.
PhysicalParams params_from_config(const std::map<std::string, std::string>& section);

/// k_f = f/(hbar nu). Throws zero_friction when nu == 0.
double drift_wavevector(const PhysicalParams& p);
/// v_f = hbar k_f / m.
double drift_velocity(const PhysicalParams& p);
/// d = (d0 + d2 nu^2 - 2 m nu xi)/(2 hbar nu). Throws zero_friction when nu == 0.
double decoherence_coefficient(const PhysicalParams& p);
/// C = (d0 + d2 nu^2 - 2 m nu xi)/(2 hbar), the x_d^2 damping coefficient.
double damping_coefficient(const PhysicalParams& p);

/// 64-bit FNV-1a over the bit patterns of the seven parameters.
std::uint64_t params_hash(const PhysicalParams& p);

struct WaveVector {
  cplx q{0.0, 0.0};

  WaveVector() = default;
  WaveVector(double re) : q(re, 0.0) {}
  WaveVector(cplx value);

  bool is_real() const { return q.imag() == 0.0; }
};

/// Uniform grid centred on zero: x_i = (i - n/2) * length / n.
/// The point i = n/2 is exactly zero; reflection is taken modulo n.
class Grid {
 public:
  Grid(std::size_t n, double length);

  std::size_t size() const { return n_; }
  double length() const { return length_; }
  double spacing() const { return length_ / static_cast<double>(n_); }
  double coordinate(std::size_t i) const {
    return (static_cast<double>(i) - static_cast<double>(n_ / 2)) * spacing();
  }
  std::size_t origin_index() const { return n_ / 2; }
  /// Index of -x_i under periodic wrap.
  std::size_t reflect(std::size_t i) const { return (n_ - i) % n_; }
  double min_coordinate() const { return coordinate(0); }
  double max_coordinate() const { return coordinate(n_ - 1); }

  std::vector<double> coordinates() const;

  bool operator==(const Grid&) const = default;

 private:
  std::size_t n_;
  double length_;
};

/// A_q(x, x_d) = e^{iqx} chi(x_d), chi sampled on `grid`.
struct ElementaryComponent {
  WaveVector q;
  Grid grid;
  std::vector<cplx> chi;

  ElementaryComponent(WaveVector q_, Grid grid_, std::vector<cplx> chi_);

  cplx at_origin() const { return chi[grid.origin_index()]; }
  /// chi(-x_d) == conj(chi(x_d)) to `tol` (relative to max|chi|). Only meaningful for real q.
  bool hermitian(double tol = 1e-12) const;
};

/// rho(x, x_d) on Grid x Grid, row-major with x as the slow index.
struct DensityOperatorGrid {
  Grid x;
  Grid xd;
  std::vector<cplx> values;
  double time = 0.0;

  DensityOperatorGrid(Grid x_, Grid xd_);
  DensityOperatorGrid(Grid x_, Grid xd_, std::vector<cplx> values_, double time_ = 0.0);

  cplx& at(std::size_t i, std::size_t j) { return values[i * xd.size() + j]; }
  cplx at(std::size_t i, std::size_t j) const { return values[i * xd.size() + j]; }

  /// max |rho(x,-x_d) - conj rho(x,x_d)| / max|rho|.
  double hermiticity_defect() const;
  double max_abs() const;
};

/// The propagator's time-dependent coefficient set at a single time.
struct PropagatorCoefficients {
  cplx a{};
  cplx k{};
  double width = 0.0;
  cplx shift{};
  double contraction = 1.0;  ///< e^{-nu t}, the x_d scale of the characteristic map
};

enum class ComponentClass { first, second };

struct Classification {
  ComponentClass kind;
  cplx trace;
};

/// Trace of e^{iqx} chi(0) over the box [-L/2, L/2]; first class iff
/// |trace| > tol_factor * L * max|chi|.
Classification classify_component(const ElementaryComponent& c, const Grid& box,
                                  double tol_factor = 1e-9);

}  // namespace openq
