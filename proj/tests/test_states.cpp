#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "doctest.h"
#include "openq/propagator.hpp"
#include "openq/states.hpp"

using namespace openq;

namespace {

const cplx I(0.0, 1.0);

PhysicalParams standard() {
  PhysicalParams p;
  p.nu = 1.0;
  p.d0 = 2.0;
  p.d2 = 1.0;
  return p;
}

double max_rel(std::span<const cplx> a, std::span<const cplx> b) {
  double e = 0.0, s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    e = std::max(e, std::abs(a[i] - b[i]));
    s = std::max(s, std::abs(b[i]));
  }
  return e / s;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::invalid_argument;
}

struct CapturedWarnings {
  std::vector<std::string> messages;
  WarningHandler old;
  CapturedWarnings() {
    old = set_warning_handler([this](std::string_view m) { messages.emplace_back(m); });
  }
  ~CapturedWarnings() { set_warning_handler(old); }
};

const Grid kX(64, 32.0);
const Grid kXd(128, 32.0);

}  // namespace

TEST_CASE("conjugate wavenumbers") {
  const auto q = conjugate_wavenumbers(Grid(8, 4.0));
  CHECK(q.size() == 8);
  CHECK(q[4] == 0.0);
  CHECK(q[5] == doctest::Approx(std::numbers::pi / 2.0));
  CHECK(q[0] == doctest::Approx(-2.0 * std::numbers::pi));
}

TEST_CASE("synthesis and decomposition are inverse") {
  const auto s = gaussian_spectral_state(kX, kXd, {0.5, 2.0, 0.7});
  const auto back = decompose(synthesize(s));
  CHECK(max_rel(back.chi, s.chi) < 1e-13);

  DensityOperatorGrid rho(kX, kXd);
  for (std::size_t i = 0; i < rho.values.size(); ++i) rho.values[i] = cplx(std::sin(1.3 * i), std::cos(0.7 * i));
  CHECK(max_rel(synthesize(decompose(rho)).values, rho.values) < 1e-13);
}

TEST_CASE("transform conventions on simple inputs") {
  const Grid x(16, 8.0), xd(8, 4.0);
  SUBCASE("delta peak") {
    DensityOperatorGrid rho(x, xd);
    const std::size_t n = 11;
    for (std::size_t k = 0; k < xd.size(); ++k) rho.at(n, k) = cplx(1.0 + k, 0.5);
    const auto s = decompose(rho);
    for (std::size_t j = 0; j < x.size(); ++j)
      for (std::size_t k = 0; k < xd.size(); ++k) {
        const cplx expected = x.spacing() * std::exp(-I * s.q[j] * x.coordinate(n)) * rho.at(n, k);
        CHECK(std::abs(s.mode(j)[k] - expected) < 1e-13);
      }
  }
  SUBCASE("plane wave") {
    DensityOperatorGrid rho(x, xd);
    const std::size_t j3 = x.origin_index() + 3;
    const double q = conjugate_wavenumbers(x)[j3];
    for (std::size_t i = 0; i < x.size(); ++i)
      for (std::size_t k = 0; k < xd.size(); ++k) rho.at(i, k) = std::exp(I * q * x.coordinate(i)) * double(k + 1);
    const auto s = decompose(rho);
    for (std::size_t j = 0; j < x.size(); ++j)
      for (std::size_t k = 0; k < xd.size(); ++k) {
        const cplx expected = j == j3 ? cplx(x.length() * double(k + 1)) : cplx(0.0);
        CHECK(std::abs(s.mode(j)[k] - expected) < 1e-12);
      }
  }
}

TEST_CASE("Gaussian state synthesizes to its Fourier pair") {
  const double dq = 0.5, c = 2.0, k0 = 0.3;
  const auto s = gaussian_spectral_state(kX, kXd, {dq, c, k0});
  CHECK(s.hermiticity_defect() < 1e-13);
  const auto rho = synthesize(s);
  double err = 0.0;
  for (std::size_t i = 0; i < kX.size(); ++i)
    for (std::size_t j = 0; j < kXd.size(); ++j) {
      const double x = kX.coordinate(i), z = kXd.coordinate(j);
      const cplx expected = dq / std::sqrt(2.0 * std::numbers::pi) * std::exp(-dq * dq * x * x / 2.0) *
                            std::exp(-z * z / (2.0 * c * c) + I * k0 * z);
      err = std::max(err, std::abs(rho.at(i, j) - expected));
    }
  CHECK(err < 1e-14);
  CHECK(std::abs(norm(rho) - 1.0) < 1e-13);
  CHECK(momentum_expectation(rho) == doctest::Approx(k0).epsilon(1e-10));
  CHECK(momentum_expectation(rho, 2.0) == doctest::Approx(2.0 * k0).epsilon(1e-10));
  CHECK(purity(rho) == doctest::Approx(dq * c / 2.0).epsilon(1e-10));
  CHECK(purity(synthesize(gaussian_spectral_state(kX, kXd, {dq, 1.0, 0.0}))) ==
        doctest::Approx(dq / 2.0).epsilon(1e-10));

  const auto density = position_density(rho);
  double total = 0.0;
  for (double v : density) total += v * kX.spacing();
  CHECK(total == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(coherence_width(rho, 0.0) == doctest::Approx(1.0 / (2.0 * c * c)).epsilon(1e-9));
  CHECK(coherence_width(rho, 3.0) == doctest::Approx(1.0 / (2.0 * c * c)).epsilon(1e-9));
}

TEST_CASE("evolve_state") {
  auto p = standard();
  p.f = 0.4;
  p.xi = 0.1;
  const auto s = gaussian_spectral_state(kX, kXd, {0.5, 2.0, 0.2});

  const auto same = evolve_state(s, p, 0.0);
  CHECK(same.chi == s.chi);

  const auto e = evolve_state(s, p, 1.5);
  CHECK(e.time == 1.5);
  CHECK(e.hermiticity_defect() < 1e-12);
  const std::size_t j = s.zero_mode() + 5;
  const auto single = evolve_component(AnalyticComponent{s.q[j], s.analytic[j]}, p, 1.5).sample(kXd);
  CHECK(max_rel(e.mode(j), single.chi) < 1e-15);
  CHECK(evolve_state(s, p, 1.5, 4).chi == e.chi);

  const auto rho0 = synthesize(s);
  double prev = purity(rho0);
  for (double t : {0.5, 1.0, 2.0, 4.0}) {
    const double now = purity(synthesize(evolve_state(s, p, t)));
    CHECK(now < prev);
    prev = now;
  }
  CHECK(std::abs(norm(synthesize(e)) - 1.0) < 1e-12);
}

TEST_CASE("sampled modes escaping the grid are reported together") {
  const Grid xd(32, 8.0);
  const auto sampled = decompose(synthesize(gaussian_spectral_state(kX, xd, {0.5, 1.0, 0.0})));
  CHECK(sampled.analytic.empty());
  CHECK(code_of([&] { evolve_state(sampled, standard(), 3.0); }) == ErrorCode::domain_escape);

  const Grid slow(16, 64.0);
  const auto gentle = decompose(synthesize(gaussian_spectral_state(slow, xd, {0.1, 1.0, 0.0})));
  const auto evolved = evolve_state(gentle, standard(), 0.01);
  CHECK(evolved.time == 0.01);
  CHECK(std::abs(norm(synthesize(evolved)) - 1.0) < 1e-12);
}

TEST_CASE("long-time behaviour") {
  auto p = standard();
  p.f = 0.3;
  const auto s = gaussian_spectral_state(kX, kXd, {0.5, 2.0, 0.0});

  const Grid wide(256, 256.0);
  const auto centred = gaussian_spectral_state(wide, kXd, {0.5, 2.0, 0.0});
  double prev_err = 1e300;
  for (double t : {10.0, 20.0, 40.0}) {
    const auto exact = synthesize(evolve_state(centred, standard(), t));
    const auto asym = longtime_asymptote(centred, standard(), t);
    const std::size_t i0 = wide.origin_index(), j0 = kXd.origin_index();
    const double err = std::abs(exact.at(i0, j0) - asym.at(i0, j0)) / std::abs(exact.at(i0, j0));
    CHECK(err < prev_err);
    prev_err = err;
  }
  CHECK(prev_err < 0.05);

  const double vf = drift_velocity(p);
  const auto a1 = longtime_asymptote(s, p, 5.0);
  const auto a4 = longtime_asymptote(s, p, 20.0);
  const double x1 = vf * 5.0, x4 = vf * 20.0;
  const auto row = [&](double x) { return static_cast<std::size_t>(std::lround(x / kX.spacing())) + kX.origin_index(); };
  REQUIRE(std::abs(kX.coordinate(row(x1)) - x1) < 1e-12);
  REQUIRE(std::abs(kX.coordinate(row(x4)) - x4) < 1e-12);
  CHECK(std::abs(a1.at(row(x1), kXd.origin_index()) / a4.at(row(x4), kXd.origin_index())) ==
        doctest::Approx(2.0).epsilon(1e-12));

  const double d = decoherence_coefficient(p);
  std::vector<double> widths;
  for (double c : {1.0, 3.0}) {
    const auto late = synthesize(evolve_state(gaussian_spectral_state(kX, kXd, {0.5, c, 0.0}), p, 20.0));
    widths.push_back(coherence_width(late, 0.0));
    CHECK(widths.back() == doctest::Approx(d / 2.0).epsilon(1e-2));
    CHECK(momentum_expectation(late) == doctest::Approx(p.f / p.nu).epsilon(1e-6));
  }
  CHECK(widths[0] == doctest::Approx(widths[1]).epsilon(1e-3));
  CHECK(coherence_width(longtime_asymptote(s, p, 20.0), 0.0) == doctest::Approx(d / 2.0).epsilon(1e-12));
}

TEST_CASE("long-time asymptote guards") {
  const auto s = gaussian_spectral_state(kX, kXd, {0.5, 2.0, 0.0});
  {
    CapturedWarnings w;
    longtime_asymptote(s, standard(), 2.0);
    REQUIRE(w.messages.size() == 1);
    CHECK(w.messages[0].find("nu t") != std::string::npos);
    longtime_asymptote(s, standard(), 6.0);
    CHECK(w.messages.size() == 1);
  }
  auto p = standard();
  p.d0 = 0.0;
  CHECK(code_of([&] { longtime_asymptote(s, p, 10.0); }) == ErrorCode::zero_decoherence);
}

TEST_CASE("observable failure modes") {
  DensityOperatorGrid zero(kX, kXd);
  CHECK(code_of([&] { momentum_expectation(zero); }) == ErrorCode::zero_norm);
  CHECK(code_of([&] { coherence_width(zero, 0.0); }) == ErrorCode::fit_failure);
  DensityOperatorGrid cusp(kX, kXd);
  for (std::size_t i = 0; i < kX.size(); ++i)
    for (std::size_t j = 0; j < kXd.size(); ++j) cusp.at(i, j) = std::exp(-std::abs(kXd.coordinate(j)));
  CHECK(code_of([&] { coherence_width(cusp, 0.0); }) == ErrorCode::fit_failure);
  CHECK(code_of([&] { coherence_width(cusp, 1e3); }) == ErrorCode::domain_escape);

  DensityOperatorGrid odd(kX, kXd);
  for (std::size_t i = 0; i < kX.size(); ++i) odd.at(i, kXd.origin_index()) = cplx(-1.0, 0.5);
  CapturedWarnings w;
  position_density(odd);
  CHECK(w.messages.size() == 2);
}

TEST_CASE("product norm") {
  const auto rho = synthesize(gaussian_spectral_state(kX, kXd, {0.5, 2.0, 0.0}));
  auto twice = rho;
  for (auto& v : twice.values) v *= 2.0;
  const std::vector<DensityOperatorGrid> axes{rho, twice, rho};
  CHECK(std::abs(product_norm(axes) - 2.0) < 1e-12);
}
