#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "openq/propagator.hpp"

using namespace openq;

namespace {

const cplx I(0.0, 1.0);

PhysicalParams sample_params() {
  PhysicalParams p;
  p.m = 1.3;
  p.hbar = 0.8;
  p.nu = 0.6;
  p.xi = 0.15;
  p.d0 = 1.7;
  p.d2 = 0.4;
  p.f = 0.35;
  return p;
}

// Solves the chi-equation along characteristics by direct quadrature:
// chi(t, x) = chi_i(X(0)) exp(int_0^t S(X(s)) ds), dX/ds = u + nu X, X(t) = x.
cplx characteristic_oracle(const PhysicalParams& p, double q, double t, double x,
                           const GaussianPolynomial& initial) {
  const double u = p.hbar * q / p.m;
  const double c = damping_coefficient(p);
  const double alpha = -p.hbar * q * q * p.d2 / (2.0 * p.m * p.m);
  const cplx beta = I * p.f / p.hbar - q * (p.d2 * p.nu / p.m - p.xi);
  auto path = [&](double s) {
    if (p.nu == 0.0) return x - u * (t - s);
    return (x + u / p.nu) * std::exp(p.nu * (s - t)) - u / p.nu;
  };
  auto source = [&](double s) {
    const double X = path(s);
    return alpha + beta * X - c * X * X;
  };
  using boost::math::quadrature::gauss_kronrod;
  const double re = gauss_kronrod<double, 61>::integrate(
      [&](double s) { return source(s).real(); }, 0.0, t, 8, 1e-14);
  const double im = gauss_kronrod<double, 61>::integrate(
      [&](double s) { return source(s).imag(); }, 0.0, t, 8, 1e-14);
  return initial(path(0.0)) * std::exp(cplx(re, im));
}

}  // namespace

TEST_CASE("analytic evolution matches the characteristic quadrature") {
  const auto initial = GaussianPolynomial::gaussian(1.1, 0.2, -0.4);
  for (auto p : {sample_params(), PhysicalParams{1.0, 1.0, 1.0, 0.0, 2.0, 1.0, 0.0}}) {
    for (double q : {0.0, 0.7, -1.3}) {
      for (double t : {0.05, 0.4, 2.5}) {
        const auto evolved = evolve_component({WaveVector(q), initial}, p, t);
        for (double x : {-1.5, 0.0, 0.3, 2.0}) {
          const cplx oracle = characteristic_oracle(p, q, t, x, initial);
          CHECK(std::abs(evolved.chi(x) - oracle) <= 1e-10 * std::max(1e-3, std::abs(oracle)));
        }
      }
    }
  }
}

TEST_CASE("frictionless limit is continuous") {
  auto p = sample_params();
  p.nu = 0.0;
  const auto initial = GaussianPolynomial::gaussian(0.9);
  const auto at_zero = evolve_component({WaveVector(0.8), initial}, p, 1.2);
  for (double x : {-1.0, 0.0, 0.6}) {
    const cplx oracle = characteristic_oracle(p, 0.8, 1.2, x, initial);
    CHECK(std::abs(at_zero.chi(x) - oracle) < 1e-11 * std::abs(oracle));
  }
  for (double nu : {1e-4, 1e-7}) {
    auto near = p;
    near.nu = nu;
    const auto a0 = coefficients(p, WaveVector(0.8), 1.2);
    const auto a1 = coefficients(near, WaveVector(0.8), 1.2);
    CHECK(std::abs(a0.a - a1.a) < 10.0 * nu);
    CHECK(std::abs(a0.k - a1.k) < 10.0 * nu);
    CHECK(std::abs(a0.width - a1.width) < 10.0 * nu);
  }
  CHECK(gaussian_width(p, 2.0) == doctest::Approx(damping_coefficient(p) * 2.0));
}

TEST_CASE("coefficients at t = 0 and the series crossover") {
  const auto p = sample_params();
  const auto c0 = coefficients(p, WaveVector(0.9), 0.0);
  CHECK(c0.a == cplx(0.0));
  CHECK(c0.k == cplx(0.0));
  CHECK(c0.width == 0.0);
  CHECK(c0.contraction == 1.0);
  // just below and above nu t = 0.5 the two evaluation branches must agree
  const double t_lo = 0.5 / p.nu * (1.0 - 1e-9);
  const double t_hi = 0.5 / p.nu * (1.0 + 1e-9);
  const auto lo = coefficients(p, WaveVector(0.9), t_lo);
  const auto hi = coefficients(p, WaveVector(0.9), t_hi);
  CHECK(std::abs(lo.a - hi.a) < 1e-8 * std::abs(hi.a));
  CHECK(std::abs(lo.k - hi.k) < 1e-8 * std::abs(hi.k));
  CHECK(std::abs(characteristic_argument(p, WaveVector(0.9), 1.0, 0.5) -
                 (0.5 * c0.contraction * std::exp(-p.nu) + coefficients(p, WaveVector(0.9), 1.0).shift)) <
        1e-14);
}

TEST_CASE("printed coefficients coincide with the rederived ones without xi") {
  auto p = sample_params();
  p.xi = 0.0;
  for (double t : {0.3, 1.7}) {
    CHECK(std::abs(coeff_a(p, WaveVector(0.6), t, Provenance::paper_printed) -
                   coeff_a(p, WaveVector(0.6), t)) < 1e-12);
    CHECK(std::abs(coeff_k(p, WaveVector(0.6), t, Provenance::paper_printed) -
                   coeff_k(p, WaveVector(0.6), t)) < 1e-12);
  }
  p.xi = 0.3;
  CHECK(std::abs(coeff_a(p, WaveVector(0.6), 0.0, Provenance::paper_printed)) > 1e-3);
}

TEST_CASE("long-time weight rate") {
  const auto p = sample_params();
  for (double q : {0.4, -1.1}) {
    const cplx rate = longtime_weight_rate(p, WaveVector(q));
    CHECK(rate.real() < 0.0);
    const double t1 = 40.0 / p.nu, t2 = 60.0 / p.nu;
    const cplx slope = (coeff_a(p, WaveVector(q), t2) - coeff_a(p, WaveVector(q), t1)) / (t2 - t1);
    CHECK(std::abs(slope - rate) < 1e-9 * std::abs(rate));
  }
  const double qi = 0.5;
  auto eq = sample_params();
  eq.f = equilibrium_force(eq, qi);
  CHECK(eq.f == doctest::Approx(-eq.hbar * eq.d0 * qi / (2.0 * eq.m * eq.nu)));
  CHECK(std::abs(longtime_weight_rate(eq, WaveVector(cplx(0.0, qi)))) < 1e-14);
  PhysicalParams still;
  CHECK_THROWS_AS(longtime_weight_rate(still, WaveVector(1.0)), Error);
}

TEST_CASE("grid evolution by interpolation agrees with the closed form") {
  const auto p = sample_params();
  const Grid grid(256, 24.0);
  const AnalyticComponent c{WaveVector(0.5), GaussianPolynomial::gaussian(1.0)};
  const auto numeric = evolve_component(c.sample(grid), p, 0.8);
  const auto exact = evolve_component(c, p, 0.8).sample(grid);
  double err = 0.0, scale = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    err = std::max(err, std::abs(numeric.chi[j] - exact.chi[j]));
    scale = std::max(scale, std::abs(exact.chi[j]));
  }
  CHECK(err < 1e-6 * scale);
  const AnalyticComponent fast{WaveVector(40.0), GaussianPolynomial::gaussian(1.0)};
  CHECK_THROWS_AS(evolve_component(fast.sample(grid), p, 5.0), Error);
}

TEST_CASE("dyad and closed basis labels") {
  const auto d = open_to_closed_basis(0.7, -1.2);
  const auto [q, k] = closed_to_open(d);
  CHECK(q == doctest::Approx(0.7));
  CHECK(k == doctest::Approx(-1.2));
  for (double x : {-0.3, 1.1}) {
    for (double xd : {0.4, -2.0}) {
      const double xp = x + xd / 2.0, xm = x - xd / 2.0;
      const cplx open = std::exp(I * d.k_plus * xp - I * d.k_minus * xm);
      const cplx closed = std::exp(I * 0.7 * x + I * -1.2 * xd);
      CHECK(std::abs(open - closed) < 1e-14);
    }
  }
}

TEST_CASE("coefficient CSV") {
  std::ostringstream os;
  const std::vector<double> times{0.0, 1.0};
  write_coefficient_csv(os, sample_params(), WaveVector(0.3), times);
  std::istringstream is(os.str());
  std::string header, line;
  std::getline(is, header);
  CHECK(header == "t,re_a,im_a,re_k,im_k,width,re_shift,im_shift");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == 2);
}
