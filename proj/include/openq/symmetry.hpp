#pragma once

#include <string>
#include <vector>

#include "openq/domain.hpp"
#include "openq/integrator.hpp"

namespace openq {

/// Independent translations of the bra (a_plus) and ket (a_minus) arguments.
struct TwoSidedShift {
  double a_plus = 0.0;
  double a_minus = 0.0;

  bool diagonal() const { return a_plus == a_minus; }
  static TwoSidedShift diagonal_by(double a) { return {a, a}; }
  /// Pure x_d translation by a.
  static TwoSidedShift antidiagonal_by(double a) { return {a / 2.0, -a / 2.0}; }
};

/// rho(x, x_d) -> rho(x - (a+ + a-)/2, x_d - (a+ - a-)), by Fourier phases on
/// both (periodic) axes.
DensityOperatorGrid two_sided_shift(const DensityOperatorGrid& rho, TwoSidedShift s);

/// Integrator settings under which shifts and derivatives are both Fourier
/// multipliers, so the defect isolates the generator's explicit x_d terms.
IntegratorConfig symmetry_integrator_config(double dt = 5e-3);

/// ||evolve(shift(rho), t) - shift(evolve(rho, t))||_2 / ||rho||_2 with the numerical oracle.
double commutation_defect(const PhysicalParams& p, const DensityOperatorGrid& rho,
                          TwoSidedShift s, double t, const IntegratorConfig& cfg);

enum class SymmetryClass { full_two_sided, diagonal_only };
std::string to_string(SymmetryClass c);

struct DefectSample {
  double a_plus;
  double a_minus;
  double t;
  double value;
};

struct SymmetryReport {
  SymmetryClass classification = SymmetryClass::full_two_sided;
  /// Generator terms with explicit x_d dependence that are switched on.
  std::vector<std::string> breaking_terms;
  std::vector<DefectSample> defects;
  PhysicalParams params;
  std::uint64_t params_hash = 0;
  double noise_floor = 1e-8;
  /// Sampled defects agree with the classification at the noise floor.
  bool consistent = true;

  std::string to_json(int indent = 2) const;
};

/// Term inspection of the generator: full G x G iff f = nu = xi = d0 = 0.
SymmetryReport classify_symmetry(const PhysicalParams& p);

/// classify_symmetry plus commutation defects for every (shift, t) pair.
SymmetryReport scan_symmetry(const PhysicalParams& p, const DensityOperatorGrid& rho,
                             const std::vector<TwoSidedShift>& shifts,
                             const std::vector<double>& times, const IntegratorConfig& cfg,
                             unsigned threads = 1);

/// Pure Gaussian packet psi ~ exp(-x^2/(4 sigma^2) + i k0 x) as rho(x, x_d).
DensityOperatorGrid gaussian_packet(const Grid& x, const Grid& xd, double sigma,
                                    double carrier = 0.0);

}  // namespace openq
