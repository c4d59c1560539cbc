#include <cmath>

#include "doctest.h"
#include "json.hpp"
#include "openq/symmetry.hpp"

using namespace openq;

namespace {

const Grid kX(64, 32.0);
const Grid kXd(96, 48.0);

double max_diff(const DensityOperatorGrid& a, const DensityOperatorGrid& b) {
  double e = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) e = std::max(e, std::abs(a.values[i] - b.values[i]));
  return e;
}

DensityOperatorGrid index_shift(const DensityOperatorGrid& rho, long di, long dj) {
  DensityOperatorGrid out(rho.x, rho.xd);
  const long nx = static_cast<long>(rho.x.size()), nd = static_cast<long>(rho.xd.size());
  for (long i = 0; i < nx; ++i)
    for (long j = 0; j < nd; ++j)
      out.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
          rho.at(static_cast<std::size_t>(((i - di) % nx + nx) % nx),
                 static_cast<std::size_t>(((j - dj) % nd + nd) % nd));
  return out;
}

}  // namespace

TEST_CASE("two-sided shifts on grid multiples are index shifts") {
  const auto rho = gaussian_packet(kX, kXd, 1.0, 0.7);
  const double h = kX.spacing();
  CHECK(kXd.spacing() == h);
  CHECK(max_diff(two_sided_shift(rho, TwoSidedShift::diagonal_by(3.0 * h)), index_shift(rho, 3, 0)) < 1e-13);
  CHECK(max_diff(two_sided_shift(rho, TwoSidedShift::antidiagonal_by(2.0 * h)), index_shift(rho, 0, 2)) < 1e-13);
  CHECK(max_diff(two_sided_shift(rho, {3.0 * h, h}), index_shift(rho, 2, 2)) < 1e-13);
  CHECK(TwoSidedShift::diagonal_by(0.4).diagonal());
  CHECK_FALSE(TwoSidedShift::antidiagonal_by(0.4).diagonal());
}

TEST_CASE("shifts compose as a group") {
  const auto rho = gaussian_packet(kX, kXd, 1.2);
  const TwoSidedShift a{0.37, -0.21}, b{-0.8, 0.55};
  const auto ab = two_sided_shift(two_sided_shift(rho, a), b);
  const auto direct = two_sided_shift(rho, {a.a_plus + b.a_plus, a.a_minus + b.a_minus});
  CHECK(max_diff(ab, direct) < 1e-13);
  const auto back = two_sided_shift(two_sided_shift(rho, a), {-a.a_plus, -a.a_minus});
  CHECK(max_diff(back, rho) < 1e-13);
  CHECK_THROWS(two_sided_shift(rho, {NAN, 0.0}));
}

TEST_CASE("pure packet") {
  const auto rho = gaussian_packet(kX, kXd, 1.0, 0.5);
  CHECK(rho.hermiticity_defect() < 1e-13);
  double trace = 0.0;
  for (std::size_t i = 0; i < kX.size(); ++i) trace += rho.at(i, kXd.origin_index()).real() * kX.spacing();
  CHECK(trace == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("classification by generator terms") {
  PhysicalParams closed;
  CHECK(classify_symmetry(closed).classification == SymmetryClass::full_two_sided);
  CHECK(classify_symmetry(closed).breaking_terms.empty());
  CHECK(to_string(SymmetryClass::full_two_sided) == "full G⊗G");

  auto d2_only = closed;
  d2_only.d2 = 1.0;
  CHECK(classify_symmetry(d2_only).classification == SymmetryClass::full_two_sided);

  auto d0 = closed;
  d0.d0 = 0.5;
  const auto r = classify_symmetry(d0);
  CHECK(r.classification == SymmetryClass::diagonal_only);
  CHECK(r.breaking_terms == std::vector<std::string>{"x_d^2"});

  auto force = closed;
  force.f = 1.0;
  CHECK(classify_symmetry(force).breaking_terms == std::vector<std::string>{"f x_d"});
  auto xi = closed;
  xi.xi = 0.2;
  CHECK(classify_symmetry(xi).breaking_terms == std::vector<std::string>{"x_d d_x"});
  auto nu = closed;
  nu.nu = 0.5;
  CHECK(classify_symmetry(nu).breaking_terms.size() == 1);
}

TEST_CASE("commutation defects") {
  const auto rho = gaussian_packet(kX, kXd, 1.0, 0.3);
  const auto cfg = symmetry_integrator_config(2e-3);
  const auto anti = TwoSidedShift::antidiagonal_by(0.5);
  const auto diag = TwoSidedShift::diagonal_by(0.5);

  PhysicalParams closed;
  closed.d2 = 0.5;
  CHECK(commutation_defect(closed, rho, anti, 0.2, cfg) < 1e-8);

  double prev = 0.0;
  for (double d0v : {0.1, 0.4, 1.6}) {
    PhysicalParams p;
    p.d0 = d0v;
    CHECK(commutation_defect(p, rho, diag, 0.2, cfg) < 1e-8);
    const double v = commutation_defect(p, rho, anti, 0.2, cfg);
    CHECK(v > prev);
    prev = v;
  }
  CHECK(prev > 1e-3);
}

TEST_CASE("scan report") {
  const auto rho = gaussian_packet(kX, kXd, 1.0);
  PhysicalParams p;
  p.nu = 0.5;
  p.d0 = 1.0;
  p.d2 = 1.0;
  const std::vector<TwoSidedShift> shifts{TwoSidedShift::diagonal_by(0.5), TwoSidedShift::antidiagonal_by(0.5)};
  const std::vector<double> times{0.05, 0.1};
  const auto r = scan_symmetry(p, rho, shifts, times, symmetry_integrator_config(2e-3), 2);
  CHECK(r.defects.size() == 4);
  CHECK(r.consistent);
  CHECK(r.defects[0].value < r.noise_floor);
  CHECK(r.defects[3].value > r.noise_floor);
  const auto serial = scan_symmetry(p, rho, shifts, times, symmetry_integrator_config(2e-3), 1);
  CHECK(serial.defects[3].value == r.defects[3].value);

  const auto j = nlohmann::json::parse(r.to_json());
  CHECK(j["classification"] == "diagonal only");
  CHECK(j["defects"].size() == 4);
  CHECK(j["params"]["nu"] == 0.5);
  CHECK(j["params_hash"].get<std::string>().size() == 16);
  CHECK(j["consistent"] == true);
}
