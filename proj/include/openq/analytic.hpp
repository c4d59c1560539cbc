#pragma once

#include <span>
#include <vector>

#include "openq/domain.hpp"

namespace openq {

/// chi(z) = (sum_k poly[k] z^k) * exp(c0 + c1 z + c2 z^2) with complex
/// coefficients. Evaluable at complex arguments and closed under the
/// affine-argument / quadratic-exponent maps of the harmonic propagator.
class GaussianPolynomial {
 public:
  GaussianPolynomial() : poly_{cplx(1.0)} {}
  GaussianPolynomial(std::vector<cplx> poly, cplx c0, cplx c1, cplx c2);

  /// exp(-(z - center)^2 / (2 sigma^2) + i carrier z)
  static GaussianPolynomial gaussian(double sigma, double center = 0.0, double carrier = 0.0);
  static GaussianPolynomial constant(cplx value);

  cplx operator()(cplx z) const;

  /// z -> chi(scale * z + offset)
  GaussianPolynomial compose_affine(cplx scale, cplx offset) const;
  /// Multiplies by exp(e0 + e1 z + e2 z^2).
  GaussianPolynomial times_exponential(cplx e0, cplx e1, cplx e2) const;
  GaussianPolynomial scaled(cplx factor) const;

  std::vector<cplx> sample(const Grid& grid, double imag_offset = 0.0) const;

  const std::vector<cplx>& poly() const { return poly_; }
  cplx c0() const { return c0_; }
  cplx c1() const { return c1_; }
  cplx c2() const { return c2_; }

 private:
  std::vector<cplx> poly_;
  cplx c0_{}, c1_{}, c2_{};
};

/// Degree-5 Lagrange interpolation of grid samples at a real argument.
/// Throws domain_escape outside [grid.min, grid.max].
cplx interpolate(const Grid& grid, std::span<const cplx> samples, double x);

}  // namespace openq
