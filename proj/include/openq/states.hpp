#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "openq/analytic.hpp"
#include "openq/domain.hpp"

namespace openq {

/// rho(x, x_d) = int dq/2pi e^{iqx} chi_q(x_d), discretised on the x grid's
/// conjugate q grid q_j = 2 pi (j - n/2) / L:
///   rho(x_n, .) = (1/L) sum_j e^{i q_j x_n} chi_j,   chi_j = h sum_n e^{-i q_j x_n} rho(x_n, .).
/// chi is row-major with q as the slow index. When `analytic` is non-empty it
/// holds the closed-form profile of every mode and `chi` its samples.
struct SpectralState {
  Grid x;
  Grid xd;
  std::vector<double> q;
  std::vector<cplx> chi;
  std::vector<GaussianPolynomial> analytic;
  double time = 0.0;

  SpectralState(Grid x_, Grid xd_);

  std::span<cplx> mode(std::size_t j) { return {chi.data() + j * xd.size(), xd.size()}; }
  std::span<const cplx> mode(std::size_t j) const {
    return {chi.data() + j * xd.size(), xd.size()};
  }
  /// Index of the q = 0 bin.
  std::size_t zero_mode() const { return x.origin_index(); }
  /// max |chi_{-q}(-x_d) - conj chi_q(x_d)| / max|chi|, over pairs present on the grid.
  double hermiticity_defect() const;
};

/// q grid conjugate to x.
std::vector<double> conjugate_wavenumbers(const Grid& x);

struct GaussianStateSpec {
  double delta_q = 0.5;     ///< q-spread: weight exp(-q^2 / (2 delta_q^2))
  double coherence = 4.0;   ///< x_d profile exp(-x_d^2 / (2 coherence^2))
  double carrier = 0.0;     ///< momentum carrier k0: factor exp(i k0 x_d)
};

/// Normalised Gaussian mixed state (norm 1). coherence = 2/delta_q is a pure
/// Gaussian wave packet.
SpectralState gaussian_spectral_state(const Grid& x, const Grid& xd, const GaussianStateSpec& spec);

DensityOperatorGrid synthesize(const SpectralState& s);
SpectralState decompose(const DensityOperatorGrid& rho);

/// Closed-form evolution of every mode by t. Analytic modes stay analytic;
/// sampled modes are interpolated along the characteristics. Modes run in
/// parallel on `threads` workers (0 = all cores).
SpectralState evolve_state(const SpectralState& s, const PhysicalParams& p, double t,
                           unsigned threads = 1);

/// Saddle-point form of the state after a long time t:
///   (m nu / sqrt(2 pi d0 hbar t)) chi_0(0) exp(-(x - v_f t)^2/(4 D t) + i k_f x_d - (d/2) x_d^2)
/// with D = d0 hbar / (2 m^2 nu^2). At x = 0 the x factor is exp(-t f^2/(2 d0 hbar)).
DensityOperatorGrid longtime_asymptote(const SpectralState& s, const PhysicalParams& p, double t);

/// h sum_n rho(x_n, 0).
cplx norm(const DensityOperatorGrid& rho);
/// (1/norm) int dx (hbar/i) d/dx_d rho(x, x_d) at x_d = 0 (real part).
double momentum_expectation(const DensityOperatorGrid& rho, double hbar = 1.0);
/// Re rho(x, 0); warns on imaginary or negative parts above 1e-8 max|rho|.
std::vector<double> position_density(const DensityOperatorGrid& rho);
/// int dx int dx_d rho(x, x_d) rho(x, -x_d), real part.
double purity(const DensityOperatorGrid& rho);
/// Quadratic coefficient of a least-squares fit of -log|rho(x, x_d)/rho(x, 0)|
/// to b x_d + w x_d^2, at the x row nearest `x`.
double coherence_width(const DensityOperatorGrid& rho, double x);

/// Norm of a separable d-dimensional state from its per-axis factors.
cplx product_norm(std::span<const DensityOperatorGrid> axes);

using WarningHandler = std::function<void(std::string_view)>;
/// Replaces the sink for soft diagnostics (default: stderr). Returns the old one.
WarningHandler set_warning_handler(WarningHandler h);
void warn(std::string_view msg);

}  // namespace openq
