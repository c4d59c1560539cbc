#include <cmath>

#include "doctest.h"
#include "openq/analytic.hpp"

using namespace openq;

TEST_CASE("gaussian polynomial evaluation") {
  const auto g = GaussianPolynomial::gaussian(2.0, 0.5, 1.5);
  for (double x : {-3.0, 0.0, 0.5, 2.25}) {
    const cplx expected = std::exp(cplx(-(x - 0.5) * (x - 0.5) / 8.0, 1.5 * x));
    CHECK(std::abs(g(x) - expected) < 1e-14);
  }
  const cplx z(0.3, -0.8);
  CHECK(std::abs(g(z) - std::exp(-(z - 0.5) * (z - 0.5) / 8.0 + cplx(0, 1.5) * z)) < 1e-14);
  CHECK(GaussianPolynomial::constant(cplx(2.0, 1.0))(cplx(7.0, 3.0)) == cplx(2.0, 1.0));
}

TEST_CASE("affine composition and exponential products") {
  const GaussianPolynomial p({cplx(1.0), cplx(0.0, 2.0), cplx(-0.5)}, cplx(0.1), cplx(0.2, 0.3),
                             cplx(-0.4, 0.1));
  const cplx s(0.7, -0.2), o(-0.3, 0.5);
  const auto q = p.compose_affine(s, o);
  const auto e = p.times_exponential(cplx(0.5), cplx(0.0, -1.0), cplx(-0.25));
  const auto k = p.scaled(cplx(0.0, 3.0));
  for (cplx z : {cplx(0.0), cplx(1.2, -0.4), cplx(-2.0, 0.7)}) {
    CHECK(std::abs(q(z) - p(s * z + o)) < 1e-13 * std::max(1.0, std::abs(q(z))));
    CHECK(std::abs(e(z) - p(z) * std::exp(0.5 - cplx(0, 1) * z - 0.25 * z * z)) <
          1e-13 * std::max(1.0, std::abs(e(z))));
    CHECK(std::abs(k(z) - cplx(0.0, 3.0) * p(z)) < 1e-13 * std::max(1.0, std::abs(k(z))));
  }
}

TEST_CASE("sampling on a grid with an imaginary offset") {
  const auto g = GaussianPolynomial::gaussian(1.0);
  const Grid grid(16, 8.0);
  const auto s = g.sample(grid, 0.25);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(std::abs(s[i] - g(cplx(grid.coordinate(i), 0.25))) < 1e-15);
  }
}

TEST_CASE("interpolation is exact for quintics and guards the domain") {
  const Grid grid(32, 8.0);
  std::vector<cplx> samples(grid.size());
  auto f = [](double x) { return cplx(x * x * x * x * x - 2.0 * x, 0.5 * x * x); };
  for (std::size_t i = 0; i < grid.size(); ++i) samples[i] = f(grid.coordinate(i));
  for (double x : {-4.0, -3.9, -0.01, 0.0, 1.37, 3.74}) {
    CHECK(std::abs(interpolate(grid, samples, x) - f(x)) < 1e-10);
  }
  CHECK_THROWS_AS(interpolate(grid, samples, 3.76), Error);
  try {
    interpolate(grid, samples, -4.01);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::domain_escape);
  }
  std::vector<cplx> wrong(5);
  CHECK_THROWS(interpolate(grid, wrong, 0.0));
}
