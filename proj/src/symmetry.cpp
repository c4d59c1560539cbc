#include "openq/symmetry.hpp"

#include <cmath>
#include <cstdio>
#include <exception>
#include <numbers>

#include "json.hpp"
#include "openq/fft.hpp"
#include "openq/kernels.hpp"
#include "openq/parallel.hpp"

namespace openq {

DensityOperatorGrid two_sided_shift(const DensityOperatorGrid& rho, TwoSidedShift s) {
  if (!std::isfinite(s.a_plus) || !std::isfinite(s.a_minus)) {
    throw Error(ErrorCode::invalid_argument, "shift must be finite");
  }
  const std::size_t nx = rho.x.size(), nd = rho.xd.size();
  if (rho.values.size() != nx * nd) throw Error(ErrorCode::grid_mismatch, "rho shape");
  const double sx = 0.5 * (s.a_plus + s.a_minus);
  const double sd = s.a_plus - s.a_minus;
  const auto kx = fft_wavenumbers(nx, rho.x.length());
  const auto kd = fft_wavenumbers(nd, rho.xd.length());

  DensityOperatorGrid out = rho;
  const FftPlan px(nx, nd, nd, 1);
  const FftPlan pd(nd, nx, 1, nd);
  px.forward(out.values);
  pd.forward(out.values);
  const double inv = 1.0 / static_cast<double>(nx * nd);
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < nd; ++j) {
      out.values[i * nd + j] *= std::polar(inv, -(kx[i] * sx + kd[j] * sd));
    }
  }
  px.backward(out.values);
  pd.backward(out.values);
  return out;
}

IntegratorConfig symmetry_integrator_config(double dt) {
  IntegratorConfig cfg;
  cfg.dt = dt;
  cfg.stencil = Stencil::spectral;
  cfg.boundary = Boundary::periodic;
  cfg.edge_threshold = 1e-6;
  return cfg;
}

double commutation_defect(const PhysicalParams& p, const DensityOperatorGrid& rho,
                          TwoSidedShift s, double t, const IntegratorConfig& cfg) {
  const auto a = evolve_rho_numeric(two_sided_shift(rho, s), p, t, cfg);
  const auto b = two_sided_shift(evolve_rho_numeric(rho, p, t, cfg), s);
  const double ref = std::sqrt(kernels::squared_norm(rho.values));
  if (ref == 0.0) return 0.0;
  return std::sqrt(kernels::squared_distance(a.values, b.values)) / ref;
}

std::string to_string(SymmetryClass c) {
  return c == SymmetryClass::full_two_sided ? "full G⊗G" : "diagonal only";
}

SymmetryReport classify_symmetry(const PhysicalParams& p) {
  SymmetryReport r;
  r.params = p;
  r.params_hash = params_hash(p);
  if (p.f != 0.0) r.breaking_terms.push_back("f x_d");
  if (damping_coefficient(p) != 0.0) r.breaking_terms.push_back("x_d^2");
  if (p.d2 * p.nu / p.m - p.xi != 0.0) r.breaking_terms.push_back("x_d d_x");
  if (p.nu != 0.0) r.breaking_terms.push_back("x_d d_d");
  const bool full = p.f == 0.0 && p.nu == 0.0 && p.xi == 0.0 && p.d0 == 0.0;
  r.classification = full ? SymmetryClass::full_two_sided : SymmetryClass::diagonal_only;
  return r;
}

SymmetryReport scan_symmetry(const PhysicalParams& p, const DensityOperatorGrid& rho,
                             const std::vector<TwoSidedShift>& shifts,
                             const std::vector<double>& times, const IntegratorConfig& cfg,
                             unsigned threads) {
  SymmetryReport r = classify_symmetry(p);
  const std::size_t n = shifts.size() * times.size();
  r.defects.resize(n);
  std::vector<std::exception_ptr> errors(n);
  parallel_for(n, threads, [&](std::size_t k) {
    const auto& s = shifts[k / times.size()];
    const double t = times[k % times.size()];
    try {
      r.defects[k] = {s.a_plus, s.a_minus, t, commutation_defect(p, rho, s, t, cfg)};
    } catch (...) {
      errors[k] = std::current_exception();
    }
  });
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  for (const auto& d : r.defects) {
    const bool diag = d.a_plus == d.a_minus;
    const bool expect_zero = diag || r.classification == SymmetryClass::full_two_sided;
    if (expect_zero && d.value >= r.noise_floor) r.consistent = false;
    if (!expect_zero && d.t > 0.0 && d.a_plus != d.a_minus && d.value < r.noise_floor) {
      r.consistent = false;
    }
  }
  return r;
}

std::string SymmetryReport::to_json(int indent) const {
  nlohmann::json j;
  j["classification"] = to_string(classification);
  j["breaking_terms"] = breaking_terms;
  j["consistent"] = consistent;
  j["noise_floor"] = noise_floor;
  j["params"] = {{"m", params.m},   {"hbar", params.hbar}, {"nu", params.nu}, {"xi", params.xi},
                 {"d0", params.d0}, {"d2", params.d2},     {"f", params.f}};
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(params_hash));
  j["params_hash"] = hash;
  j["defects"] = nlohmann::json::array();
  for (const auto& d : defects) {
    j["defects"].push_back({{"a_plus", d.a_plus}, {"a_minus", d.a_minus}, {"t", d.t}, {"value", d.value}});
  }
  return j.dump(indent);
}

DensityOperatorGrid gaussian_packet(const Grid& x, const Grid& xd, double sigma, double carrier) {
  if (!(sigma > 0.0)) throw Error(ErrorCode::invalid_argument, "sigma must be > 0");
  DensityOperatorGrid rho(x, xd);
  const double pref = 1.0 / std::sqrt(2.0 * std::numbers::pi * sigma * sigma);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xv = x.coordinate(i);
    for (std::size_t j = 0; j < xd.size(); ++j) {
      const double z = xd.coordinate(j);
      rho.at(i, j) = pref * std::exp(cplx(-xv * xv / (2.0 * sigma * sigma) - z * z / (8.0 * sigma * sigma),
                                          carrier * z));
    }
  }
  return rho;
}

}  // namespace openq
