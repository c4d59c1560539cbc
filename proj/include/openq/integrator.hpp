#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "openq/domain.hpp"
#include "openq/fft.hpp"

namespace openq {

enum class Stencil { order2, order4, spectral };
enum class Boundary { periodic, clamped_decay };

struct IntegratorConfig {
  double dt = 1e-3;
  Stencil stencil = Stencil::order4;
  Boundary boundary = Boundary::clamped_decay;
  double safety = 0.9;
  /// Edge magnitude (relative to max|state|) above which BoundaryLeak is raised.
  double edge_threshold = 1e-10;

  void validate() const;
};

/// The x_d line on which chi is sampled: z_j = grid_j + i * imag_offset.
/// A nonzero offset is needed for complex q: on the real axis the transport
/// speed -(hbar q/m + nu x_d) has an imaginary part that amplifies Fourier
/// mode k at rate hbar Im(q) k / m, so the initial-value problem is ill-posed.
/// Along Im x_d = -hbar Im(q)/(m nu) the speed is real.
struct Contour {
  Grid grid;
  double imag_offset = 0.0;

  Contour(Grid g, double offset = 0.0) : grid(g), imag_offset(offset) {}
  cplx point(std::size_t j) const { return {grid.coordinate(j), imag_offset}; }
};

/// The contour on which the chi-equation for wave vector q is well-posed.
Contour oracle_contour(const PhysicalParams& p, WaveVector q, const Grid& grid);

/// d/dx_d with the configured stencil and boundary policy.
class LineDerivative {
 public:
  LineDerivative(const Grid& grid, Stencil stencil, Boundary boundary);

  void apply(std::span<const cplx> in, std::span<cplx> out) const;
  /// Spectral radius of the discrete d/dx_d.
  double spectral_radius() const;

 private:
  Grid grid_;
  Stencil stencil_;
  Boundary boundary_;
  std::unique_ptr<SpectralDerivative> spectral_;
};

/// Right-hand side of the chi-equation for one wave vector,
///   d_t chi = -(hbar q/m + nu x_d) d_d chi
///             + [-hbar q^2 d2/(2m^2) + (i f/hbar - q(d2 nu/m - xi)) x_d - C x_d^2] chi,
/// which is the master equation restricted to rho = e^{iqx} chi(x_d).
class ChiOperator {
 public:
  ChiOperator(const PhysicalParams& p, WaveVector q, const Contour& contour,
              const IntegratorConfig& cfg);

  void apply(std::span<const cplx> chi, std::span<cplx> out) const;
  /// Largest dt the explicit RK4 step tolerates at the given safety factor.
  double max_stable_dt(double safety) const;

  const std::vector<cplx>& advection() const { return advection_; }
  const std::vector<cplx>& source() const { return source_; }

 private:
  Contour contour_;
  LineDerivative deriv_;
  std::vector<cplx> advection_;
  std::vector<cplx> source_;
  mutable std::vector<cplx> scratch_;
};

std::vector<cplx> chi_rhs(const PhysicalParams& p, WaveVector q, std::span<const cplx> chi,
                          const Contour& contour, const IntegratorConfig& cfg = {});

/// Classical RK4 integration of the chi-equation to t_final with steps <= cfg.dt.
/// Throws stability_violation or boundary_leak.
std::vector<cplx> evolve_chi_numeric(std::span<const cplx> chi, const PhysicalParams& p,
                                     WaveVector q, double t_final, const Contour& contour,
                                     const IntegratorConfig& cfg);

/// The full master-equation generator on the (x, x_d) grid; x is periodic and
/// differentiated spectrally, x_d uses the configured stencil.
class RhoOperator {
 public:
  RhoOperator(const PhysicalParams& p, const Grid& x, const Grid& xd, const IntegratorConfig& cfg);

  void apply(std::span<const cplx> rho, std::span<cplx> out) const;
  double max_stable_dt(double safety) const;

 private:
  Grid x_, xd_;
  LineDerivative deriv_;
  FftPlan x_plan_;
  std::vector<double> kx_;
  cplx mixed_, diffusion_;
  std::vector<cplx> source_, x_drift_, xd_drift_;
  mutable std::vector<cplx> dx_, dxx_, dd_, dxd_;
};

DensityOperatorGrid rho_rhs(const PhysicalParams& p, const DensityOperatorGrid& rho,
                            const IntegratorConfig& cfg = {});

DensityOperatorGrid evolve_rho_numeric(const DensityOperatorGrid& rho, const PhysicalParams& p,
                                       double t_final, const IntegratorConfig& cfg);

/// chi(t, x_d) supplied in closed form, evaluated at complex x_d.
using AnalyticEvaluator = std::function<cplx(double t, cplx xd)>;

/// max over t of |d_t chi - rhs(chi)| / max|chi|, with d_t by centred
/// differences of step h_t and rhs by the configured stencil.
double pde_residual(const PhysicalParams& p, WaveVector q, const AnalyticEvaluator& chi,
                    std::span<const double> t_samples, const Contour& contour,
                    const IntegratorConfig& cfg, double h_t);

/// Edge magnitude of a line: max over the two outermost points at each end,
/// relative to max|v|.
double edge_magnitude(std::span<const cplx> v);

}  // namespace openq
