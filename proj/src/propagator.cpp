#include "openq/propagator.hpp"

#include <cmath>
#include <ostream>

#include "openq/io.hpp"

namespace openq {
namespace {

constexpr double kSeriesCrossover = 0.5;
constexpr int kSeriesTerms = 24;

// (1 - e^{-z})/z
double phi1(double z) {
  if (std::abs(z) < kSeriesCrossover) {
    double term = 1.0, sum = 0.0;
    for (int n = 0; n < kSeriesTerms; ++n) {
      sum += term;
      term *= -z / static_cast<double>(n + 2);
    }
    return sum;
  }
  return -std::expm1(-z) / z;
}

// (z - 1 + e^{-z})/z^2
double phi2(double z) {
  if (std::abs(z) < kSeriesCrossover) {
    double term = 0.5, sum = 0.0;
    for (int n = 0; n < kSeriesTerms; ++n) {
      sum += term;
      term *= -z / static_cast<double>(n + 3);
    }
    return sum;
  }
  return (z + std::expm1(-z)) / (z * z);
}

// ((3 - 4e^{-z} + e^{-2z})/2 - z)/z^3
double psi(double z) {
  if (std::abs(z) < kSeriesCrossover) {
    // sum_{n>=3} (-1)^n (2^n - 4) z^{n-3} / (2 n!)
    double sum = 0.0;
    double zpow = 1.0;
    double fact = 6.0;
    double two_n = 8.0;
    for (int n = 3; n < 3 + kSeriesTerms; ++n) {
      const double sign = (n % 2 == 0) ? 1.0 : -1.0;
      sum += sign * (two_n - 4.0) * zpow / (2.0 * fact);
      zpow *= z;
      fact *= static_cast<double>(n + 1);
      two_n *= 2.0;
    }
    return sum;
  }
  const double e1 = std::exp(-z);
  return ((3.0 - 4.0 * e1 + e1 * e1) / 2.0 - z) / (z * z * z);
}

void check_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw Error(ErrorCode::invalid_argument, "t must be >= 0");
}

PropagatorCoefficients rederived(const PhysicalParams& p, cplx q, double t) {
  const cplx I(0.0, 1.0);
  const cplx u = p.hbar * q / p.m;
  const cplx alpha = -p.hbar * q * q * p.d2 / (2.0 * p.m * p.m);
  const cplx beta = I * p.f / p.hbar - q * (p.d2 * p.nu / p.m - p.xi);
  const double c = damping_coefficient(p);
  const double z = p.nu * t;
  const double g1 = phi1(z);

  PropagatorCoefficients out;
  out.contraction = std::exp(-z);
  out.width = c * t * phi1(2.0 * z);
  out.shift = -u * t * g1;
  out.k = -I * (beta * t * g1 + c * u * t * t * g1 * g1);
  out.a = alpha * t - beta * u * t * t * phi2(z) + c * u * u * t * t * t * psi(z);
  return out;
}

PropagatorCoefficients printed(const PhysicalParams& p, cplx q, double t) {
  if (p.nu == 0.0) throw Error(ErrorCode::zero_friction, "printed coefficients need nu > 0");
  const cplx I(0.0, 1.0);
  const double nu = p.nu, m = p.m, hb = p.hbar;
  const double e1 = std::exp(-nu * t);
  const double e2 = e1 * e1;
  PropagatorCoefficients out;
  out.contraction = e1;
  out.width = decoherence_coefficient(p) / 2.0 * (1.0 - e2);
  out.shift = -(hb * q / (m * nu)) * (1.0 - e1);
  out.a = -1.0 / (2.0 * m * nu * nu) *
              (2.0 * I * q * p.f * (nu * t - 1.0 + e1) + hb * q * q * p.xi * (1.0 + 2.0 * I * e1 + e2)) -
          hb * q * q / (4.0 * m * m * nu * nu * nu) *
              (p.d0 * (-e2 + 4.0 * e1 - 3.0 + 2.0 * nu * t) + p.d2 * nu * nu * (1.0 - e2));
  out.k = (1.0 - e1) / (hb * nu) * (p.f - I * hb * q * p.xi * e1) -
          I * q / (2.0 * m * nu * nu) *
              (p.d0 * (1.0 - e1) * (1.0 - e1) - p.d2 * nu * nu * (1.0 - e2));
  return out;
}

}  // namespace

PropagatorCoefficients coefficients(const PhysicalParams& p, WaveVector q, double t,
                                    Provenance prov) {
  check_time(t);
  return prov == Provenance::rederived ? rederived(p, q.q, t) : printed(p, q.q, t);
}

double gaussian_width(const PhysicalParams& p, double t) {
  check_time(t);
  return damping_coefficient(p) * t * phi1(2.0 * p.nu * t);
}

cplx coeff_a(const PhysicalParams& p, WaveVector q, double t, Provenance prov) {
  return coefficients(p, q, t, prov).a;
}

cplx coeff_k(const PhysicalParams& p, WaveVector q, double t, Provenance prov) {
  return coefficients(p, q, t, prov).k;
}

cplx characteristic_argument(const PhysicalParams& p, WaveVector q, double t, cplx xd) {
  const auto c = coefficients(p, q, t);
  return c.contraction * xd + c.shift;
}

ElementaryComponent AnalyticComponent::sample(const Grid& grid) const {
  return ElementaryComponent(q, grid, chi.sample(grid));
}

AnalyticComponent evolve_component(const AnalyticComponent& c, const PhysicalParams& p, double t,
                                   Provenance prov) {
  const auto co = coefficients(p, c.q, t, prov);
  const cplx I(0.0, 1.0);
  auto chi = c.chi.compose_affine(co.contraction, co.shift)
                 .times_exponential(co.a, I * co.k, cplx(-co.width));
  return {c.q, std::move(chi)};
}

ElementaryComponent evolve_component(const ElementaryComponent& c, const PhysicalParams& p,
                                     double t) {
  if (!c.q.is_real()) {
    throw Error(ErrorCode::domain_escape,
                "complex q shifts the characteristic off the real axis; use an analytic profile");
  }
  const auto co = coefficients(p, c.q, t);
  const cplx I(0.0, 1.0);
  std::vector<cplx> out(c.grid.size());
  for (std::size_t j = 0; j < out.size(); ++j) {
    const double xd = c.grid.coordinate(j);
    const double arg = co.contraction * xd + co.shift.real();
    out[j] = interpolate(c.grid, c.chi, arg) * std::exp(co.a + I * co.k * xd - co.width * xd * xd);
  }
  return ElementaryComponent(c.q, c.grid, std::move(out));
}

cplx longtime_weight_rate(const PhysicalParams& p, WaveVector q) {
  const double kf = drift_wavevector(p);
  const cplx I(0.0, 1.0);
  return -(p.hbar * q.q / p.m) * (I * kf + p.d0 * q.q / (2.0 * p.m * p.nu * p.nu));
}

double equilibrium_force(const PhysicalParams& p, double q_i) {
  if (p.nu == 0.0) throw Error(ErrorCode::zero_friction, "equilibrium force needs nu > 0");
  return -p.hbar * p.d0 * q_i / (2.0 * p.m * p.nu);
}

DyadLabels open_to_closed_basis(double q, double k) { return {k + q / 2.0, k - q / 2.0}; }

std::pair<double, double> closed_to_open(DyadLabels dyad) {
  return {dyad.k_plus - dyad.k_minus, (dyad.k_plus + dyad.k_minus) / 2.0};
}

void write_coefficient_csv(std::ostream& os, const PhysicalParams& p, WaveVector q,
                           std::span<const double> times, Provenance prov) {
  CsvWriter csv(os, {"t", "re_a", "im_a", "re_k", "im_k", "width", "re_shift", "im_shift"});
  for (double t : times) {
    const auto c = coefficients(p, q, t, prov);
    csv.row({t, c.a.real(), c.a.imag(), c.k.real(), c.k.imag(), c.width, c.shift.real(),
             c.shift.imag()});
  }
}

}  // namespace openq
