#include "openq/analytic.hpp"

#include <algorithm>
#include <cmath>

namespace openq {

GaussianPolynomial::GaussianPolynomial(std::vector<cplx> poly, cplx c0, cplx c1, cplx c2)
    : poly_(std::move(poly)), c0_(c0), c1_(c1), c2_(c2) {
  if (poly_.empty()) poly_.push_back(cplx(0.0));
}

GaussianPolynomial GaussianPolynomial::gaussian(double sigma, double center, double carrier) {
  if (!(sigma > 0.0)) throw Error(ErrorCode::invalid_argument, "gaussian width must be > 0");
  const double s2 = 2.0 * sigma * sigma;
  // -(z - x0)^2 / s2 + i k z
  return GaussianPolynomial({cplx(1.0)}, cplx(-center * center / s2),
                            cplx(2.0 * center / s2, carrier), cplx(-1.0 / s2));
}

GaussianPolynomial GaussianPolynomial::constant(cplx value) {
  return GaussianPolynomial({value}, cplx(0.0), cplx(0.0), cplx(0.0));
}

cplx GaussianPolynomial::operator()(cplx z) const {
  cplx p(0.0);
  for (auto it = poly_.rbegin(); it != poly_.rend(); ++it) p = p * z + *it;
  return p * std::exp(c0_ + z * (c1_ + z * c2_));
}

GaussianPolynomial GaussianPolynomial::compose_affine(cplx scale, cplx offset) const {
  // P(s z + o) via Horner on polynomials.
  std::vector<cplx> out{cplx(0.0)};
  for (auto it = poly_.rbegin(); it != poly_.rend(); ++it) {
    std::vector<cplx> next(out.size() + 1, cplx(0.0));
    for (std::size_t k = 0; k < out.size(); ++k) {
      next[k] += out[k] * offset;
      next[k + 1] += out[k] * scale;
    }
    next[0] += *it;
    out = std::move(next);
  }
  while (out.size() > 1 && out.back() == cplx(0.0)) out.pop_back();
  const cplx n0 = c0_ + c1_ * offset + c2_ * offset * offset;
  const cplx n1 = c1_ * scale + 2.0 * c2_ * scale * offset;
  const cplx n2 = c2_ * scale * scale;
  return GaussianPolynomial(std::move(out), n0, n1, n2);
}

GaussianPolynomial GaussianPolynomial::times_exponential(cplx e0, cplx e1, cplx e2) const {
  return GaussianPolynomial(poly_, c0_ + e0, c1_ + e1, c2_ + e2);
}

GaussianPolynomial GaussianPolynomial::scaled(cplx factor) const {
  std::vector<cplx> p = poly_;
  for (auto& c : p) c *= factor;
  return GaussianPolynomial(std::move(p), c0_, c1_, c2_);
}

std::vector<cplx> GaussianPolynomial::sample(const Grid& grid, double imag_offset) const {
  std::vector<cplx> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out[i] = (*this)(cplx(grid.coordinate(i), imag_offset));
  }
  return out;
}

cplx interpolate(const Grid& grid, std::span<const cplx> samples, double x) {
  const std::size_t n = grid.size();
  if (samples.size() != n) throw Error(ErrorCode::grid_mismatch, "sample count != grid size");
  const double lo = grid.min_coordinate();
  const double hi = grid.max_coordinate();
  if (!(x >= lo && x <= hi)) {
    throw Error(ErrorCode::domain_escape,
                "characteristic argument " + std::to_string(x) + " outside sampled domain");
  }
  const double h = grid.spacing();
  const double u = (x - lo) / h;
  constexpr int points = 6;
  auto base = static_cast<long>(std::floor(u)) - points / 2 + 1;
  base = std::clamp(base, 0L, static_cast<long>(n) - points);
  cplx result(0.0);
  for (int a = 0; a < points; ++a) {
    double w = 1.0;
    for (int b = 0; b < points; ++b) {
      if (b == a) continue;
      w *= (u - static_cast<double>(base + b)) / static_cast<double>(a - b);
    }
    result += w * samples[static_cast<std::size_t>(base + a)];
  }
  return result;
}

}  // namespace openq
