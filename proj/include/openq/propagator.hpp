#pragma once

#include <iosfwd>
#include <span>
#include <utility>

#include "openq/analytic.hpp"
#include "openq/domain.hpp"

namespace openq {

/// Which closed form of a_q(t), k_q(t) to use. `rederived` is the solution of
/// the chi-equation along its characteristics; `paper_printed` is the variant
/// whose xi-term violates a_q(0) = 0, kept only as a negative control.
enum class Provenance { rederived, paper_printed };

/// a_q(t), k_q(t), width(t), shift(t) and e^{-nu t}. nu = 0 is handled by
/// series expansion of the removable singularities (rederived form only).
PropagatorCoefficients coefficients(const PhysicalParams& p, WaveVector q, double t,
                                    Provenance prov = Provenance::rederived);

/// (d/2)(1 - e^{-2 nu t}); equals C t in the frictionless limit.
double gaussian_width(const PhysicalParams& p, double t);
cplx coeff_a(const PhysicalParams& p, WaveVector q, double t,
             Provenance prov = Provenance::rederived);
cplx coeff_k(const PhysicalParams& p, WaveVector q, double t,
             Provenance prov = Provenance::rederived);
/// x_d e^{-nu t} - (hbar q / m nu)(1 - e^{-nu t}): the initial coordinate of
/// the characteristic that reaches x_d at time t.
cplx characteristic_argument(const PhysicalParams& p, WaveVector q, double t, cplx xd);

/// A component whose profile is a closed-form Gaussian x polynomial.
struct AnalyticComponent {
  WaveVector q;
  GaussianPolynomial chi;

  ElementaryComponent sample(const Grid& grid) const;
  /// Samples on the line x_d = grid + i*imag_offset.
  std::vector<cplx> sample_on(const Grid& grid, double imag_offset) const {
    return chi.sample(grid, imag_offset);
  }
};

/// Exact evolution of an analytic component; the result is again analytic.
AnalyticComponent evolve_component(const AnalyticComponent& c, const PhysicalParams& p, double t,
                                   Provenance prov = Provenance::rederived);
/// Evolution of grid samples by interpolation at the characteristic argument.
/// Needs real q (a complex shift cannot be read off grid data); throws
/// domain_escape when an argument leaves the sampled interval.
ElementaryComponent evolve_component(const ElementaryComponent& c, const PhysicalParams& p,
                                     double t);

/// -(hbar q/m)(i k_f + d0 q/(2 m nu^2)), the asymptotic rate of e^{a_q}.
cplx longtime_weight_rate(const PhysicalParams& p, WaveVector q);

/// Force making the q = i q_i component stationary in norm:
/// f = -hbar d0 q_i / (2 m nu).
double equilibrium_force(const PhysicalParams& p, double q_i);

struct DyadLabels {
  double k_plus;
  double k_minus;
};

/// e^{i k+ x+ - i k- x-} == e^{iqx + i k x_d} with x± = x ± x_d/2.
DyadLabels open_to_closed_basis(double q, double k);
std::pair<double, double> closed_to_open(DyadLabels dyad);

/// CSV with columns t,re_a,im_a,re_k,im_k,width,re_shift,im_shift (17 digits).
void write_coefficient_csv(std::ostream& os, const PhysicalParams& p, WaveVector q,
                           std::span<const double> times,
                           Provenance prov = Provenance::rederived);

}  // namespace openq
