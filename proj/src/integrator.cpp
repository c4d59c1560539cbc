#include "openq/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "openq/kernels.hpp"

namespace openq {
namespace {

// Radius of the half-disc inside the RK4 stability region.
constexpr double kRk4Radius = 2.5;

double max_abs(std::span<const cplx> v) {
  double m = 0.0;
  for (const auto& z : v) m = std::max(m, std::abs(z));
  return m;
}

template <class Apply>
void rk4_integrate(std::vector<cplx>& y, double t_final, double dt_max, double edge_threshold,
                   std::size_t line_length, Apply&& apply) {
  const auto steps = static_cast<std::size_t>(std::ceil(t_final / dt_max - 1e-12));
  const double dt = t_final / static_cast<double>(std::max<std::size_t>(steps, 1));
  const std::size_t n = y.size();
  std::vector<cplx> k1(n), k2(n), k3(n), k4(n), tmp(n);
  for (std::size_t s = 0; s < steps; ++s) {
    apply(y, k1);
    kernels::axpy_into(tmp, y, 0.5 * dt, k1);
    apply(tmp, k2);
    kernels::axpy_into(tmp, y, 0.5 * dt, k2);
    apply(tmp, k3);
    kernels::axpy_into(tmp, y, dt, k3);
    apply(tmp, k4);
    kernels::axpy(y, dt / 6.0, k1);
    kernels::axpy(y, dt / 3.0, k2);
    kernels::axpy(y, dt / 3.0, k3);
    kernels::axpy(y, dt / 6.0, k4);

    const double scale = max_abs(y);
    if (!std::isfinite(scale)) {
      throw Error(ErrorCode::stability_violation, "non-finite state during integration");
    }
    for (std::size_t off = 0; off < n; off += line_length) {
      const std::span<const cplx> line(y.data() + off, line_length);
      const double edge = std::max({std::abs(line[0]), std::abs(line[1]),
                                    std::abs(line[line_length - 2]),
                                    std::abs(line[line_length - 1])});
      if (edge > edge_threshold * scale) {
        throw Error(ErrorCode::boundary_leak,
                    "edge magnitude " + std::to_string(edge / scale) + " exceeds threshold at t=" +
                        std::to_string(static_cast<double>(s + 1) * dt));
      }
    }
  }
}

void check_steps(double dt, double dt_stable) {
  if (dt > dt_stable) {
    throw Error(ErrorCode::stability_violation,
                "dt = " + std::to_string(dt) + " exceeds stability bound " + std::to_string(dt_stable));
  }
}

}  // namespace

void IntegratorConfig::validate() const {
  if (!(dt > 0.0)) throw Error(ErrorCode::invalid_argument, "dt must be > 0");
  if (!(safety > 0.0 && safety <= 1.0)) throw Error(ErrorCode::invalid_argument, "safety in (0,1]");
  if (stencil == Stencil::spectral && boundary != Boundary::periodic) {
    throw Error(ErrorCode::invalid_argument, "spectral stencil requires periodic boundary");
  }
}

Contour oracle_contour(const PhysicalParams& p, WaveVector q, const Grid& grid) {
  if (q.is_real()) return Contour(grid, 0.0);
  if (p.nu == 0.0) {
    throw Error(ErrorCode::ill_posed, "complex q without friction has no real-transport contour");
  }
  return Contour(grid, -p.hbar * q.q.imag() / (p.m * p.nu));
}

LineDerivative::LineDerivative(const Grid& grid, Stencil stencil, Boundary boundary)
    : grid_(grid), stencil_(stencil), boundary_(boundary) {
  if (stencil == Stencil::spectral) {
    if (boundary != Boundary::periodic) {
      throw Error(ErrorCode::invalid_argument, "spectral stencil requires periodic boundary");
    }
    spectral_ = std::make_unique<SpectralDerivative>(grid);
  }
}

void LineDerivative::apply(std::span<const cplx> in, std::span<cplx> out) const {
  if (stencil_ == Stencil::spectral) {
    spectral_->first(in, out);
    return;
  }
  kernels::central_d1(out, in, grid_.spacing(), stencil_ == Stencil::order2 ? 2 : 4,
                      boundary_ == Boundary::periodic);
}

double LineDerivative::spectral_radius() const {
  const double h = grid_.spacing();
  switch (stencil_) {
    case Stencil::order2: return 1.0 / h;
    case Stencil::order4: return 1.3722 / h;  // max of (8 sin t - sin 2t)/6
    case Stencil::spectral: return std::numbers::pi / h;
  }
  return std::numbers::pi / h;
}

ChiOperator::ChiOperator(const PhysicalParams& p, WaveVector q, const Contour& contour,
                         const IntegratorConfig& cfg)
    : contour_(contour),
      deriv_(contour.grid, cfg.stencil, cfg.boundary),
      advection_(contour.grid.size()),
      source_(contour.grid.size()),
      scratch_(contour.grid.size()) {
  const cplx I(0.0, 1.0);
  const cplx qq = q.q;
  const cplx u = p.hbar * qq / p.m;
  const cplx alpha = -p.hbar * qq * qq * p.d2 / (2.0 * p.m * p.m);
  const cplx beta = I * p.f / p.hbar - qq * (p.d2 * p.nu / p.m - p.xi);
  const double c = damping_coefficient(p);
  for (std::size_t j = 0; j < advection_.size(); ++j) {
    const cplx z = contour.point(j);
    advection_[j] = -(u + p.nu * z);
    source_[j] = alpha + beta * z - c * z * z;
  }
}

void ChiOperator::apply(std::span<const cplx> chi, std::span<cplx> out) const {
  deriv_.apply(chi, scratch_);
  std::fill(out.begin(), out.end(), cplx(0.0));
  kernels::mul_acc(out, advection_, scratch_);
  kernels::mul_acc(out, source_, chi);
}

double ChiOperator::max_stable_dt(double safety) const {
  const double lambda = max_abs(advection_) * deriv_.spectral_radius() + max_abs(source_);
  if (lambda == 0.0) return std::numeric_limits<double>::infinity();
  return safety * kRk4Radius / lambda;
}

std::vector<cplx> chi_rhs(const PhysicalParams& p, WaveVector q, std::span<const cplx> chi,
                          const Contour& contour, const IntegratorConfig& cfg) {
  if (chi.size() != contour.grid.size()) throw Error(ErrorCode::grid_mismatch, "chi size");
  ChiOperator op(p, q, contour, cfg);
  std::vector<cplx> out(chi.size());
  op.apply(chi, out);
  return out;
}

std::vector<cplx> evolve_chi_numeric(std::span<const cplx> chi, const PhysicalParams& p,
                                     WaveVector q, double t_final, const Contour& contour,
                                     const IntegratorConfig& cfg) {
  cfg.validate();
  if (chi.size() != contour.grid.size()) throw Error(ErrorCode::grid_mismatch, "chi size");
  if (!(t_final >= 0.0)) throw Error(ErrorCode::invalid_argument, "t_final must be >= 0");
  std::vector<cplx> y(chi.begin(), chi.end());
  if (t_final == 0.0) return y;

  ChiOperator op(p, q, contour, cfg);
  double worst_im = 0.0;
  for (const auto& v : op.advection()) worst_im = std::max(worst_im, std::abs(v.imag()));
  if (worst_im > 1e-12 * std::max(1.0, max_abs(op.advection()))) {
    throw Error(ErrorCode::ill_posed,
                "transport speed is complex on this contour; use oracle_contour()");
  }
  const auto steps = static_cast<std::size_t>(std::ceil(t_final / cfg.dt - 1e-12));
  check_steps(t_final / static_cast<double>(steps), op.max_stable_dt(cfg.safety));
  rk4_integrate(y, t_final, cfg.dt, cfg.edge_threshold, y.size(),
                [&](std::span<const cplx> in, std::span<cplx> out) { op.apply(in, out); });
  return y;
}

RhoOperator::RhoOperator(const PhysicalParams& p, const Grid& x, const Grid& xd,
                         const IntegratorConfig& cfg)
    : x_(x),
      xd_(xd),
      deriv_(xd, cfg.stencil, cfg.boundary),
      x_plan_(x.size(), xd.size(), xd.size(), 1),
      kx_(fft_wavenumbers(x.size(), x.length())),
      source_(xd.size()),
      x_drift_(xd.size()),
      xd_drift_(xd.size()),
      dx_(x.size() * xd.size()),
      dxx_(x.size() * xd.size()),
      dd_(x.size() * xd.size()),
      dxd_(x.size() * xd.size()) {
  const cplx I(0.0, 1.0);
  mixed_ = I * p.hbar / p.m;
  diffusion_ = p.hbar * p.d2 / (2.0 * p.m * p.m);
  const double c = damping_coefficient(p);
  for (std::size_t j = 0; j < xd.size(); ++j) {
    const double z = xd.coordinate(j);
    source_[j] = I * p.f * z / p.hbar - c * z * z;
    x_drift_[j] = I * (p.d2 * p.nu / p.m - p.xi) * z;
    xd_drift_[j] = -p.nu * z;
  }
}

void RhoOperator::apply(std::span<const cplx> rho, std::span<cplx> out) const {
  const std::size_t nx = x_.size(), nd = xd_.size();
  std::copy(rho.begin(), rho.end(), dx_.begin());
  x_plan_.forward(dx_);
  std::copy(dx_.begin(), dx_.end(), dxx_.begin());
  const double inv = 1.0 / static_cast<double>(nx);
  for (std::size_t i = 0; i < nx; ++i) {
    const double k = (nx % 2 == 0 && i == nx / 2) ? 0.0 : kx_[i];
    const cplx s1(0.0, k * inv);
    const double s2 = -kx_[i] * kx_[i] * inv;
    for (std::size_t j = 0; j < nd; ++j) {
      dx_[i * nd + j] *= s1;
      dxx_[i * nd + j] *= s2;
    }
  }
  x_plan_.backward(dx_);
  x_plan_.backward(dxx_);

  for (std::size_t i = 0; i < nx; ++i) {
    const std::size_t off = i * nd;
    const std::span<const cplx> row(rho.data() + off, nd);
    const std::span<cplx> dd(dd_.data() + off, nd);
    const std::span<cplx> dxd(dxd_.data() + off, nd);
    const std::span<const cplx> dx(dx_.data() + off, nd);
    const std::span<const cplx> dxx(dxx_.data() + off, nd);
    deriv_.apply(row, dd);
    deriv_.apply(dx, dxd);
    const std::span<cplx> o(out.data() + off, nd);
    std::fill(o.begin(), o.end(), cplx(0.0));
    kernels::axpy(o, mixed_, dxd);
    kernels::mul_acc(o, source_, row);
    kernels::mul_acc(o, x_drift_, dx);
    kernels::mul_acc(o, xd_drift_, dd);
    kernels::axpy(o, diffusion_, dxx);
  }
}

double RhoOperator::max_stable_dt(double safety) const {
  const double kx = std::numbers::pi / x_.spacing();
  const double kd = deriv_.spectral_radius();
  const double lambda = std::abs(mixed_) * kx * kd + max_abs(source_) + max_abs(x_drift_) * kx +
                        max_abs(xd_drift_) * kd + std::abs(diffusion_) * kx * kx;
  if (lambda == 0.0) return std::numeric_limits<double>::infinity();
  return safety * kRk4Radius / lambda;
}

DensityOperatorGrid rho_rhs(const PhysicalParams& p, const DensityOperatorGrid& rho,
                            const IntegratorConfig& cfg) {
  RhoOperator op(p, rho.x, rho.xd, cfg);
  DensityOperatorGrid out(rho.x, rho.xd);
  out.time = rho.time;
  op.apply(rho.values, out.values);
  return out;
}

DensityOperatorGrid evolve_rho_numeric(const DensityOperatorGrid& rho, const PhysicalParams& p,
                                       double t_final, const IntegratorConfig& cfg) {
  cfg.validate();
  if (!(t_final >= 0.0)) throw Error(ErrorCode::invalid_argument, "t_final must be >= 0");
  DensityOperatorGrid out = rho;
  if (t_final == 0.0) return out;
  RhoOperator op(p, rho.x, rho.xd, cfg);
  const auto steps = static_cast<std::size_t>(std::ceil(t_final / cfg.dt - 1e-12));
  check_steps(t_final / static_cast<double>(steps), op.max_stable_dt(cfg.safety));
  rk4_integrate(out.values, t_final, cfg.dt, cfg.edge_threshold, rho.xd.size(),
                [&](std::span<const cplx> in, std::span<cplx> o) { op.apply(in, o); });
  out.time = rho.time + t_final;
  return out;
}

double pde_residual(const PhysicalParams& p, WaveVector q, const AnalyticEvaluator& chi,
                    std::span<const double> t_samples, const Contour& contour,
                    const IntegratorConfig& cfg, double h_t) {
  if (!(h_t > 0.0)) throw Error(ErrorCode::invalid_argument, "h_t must be > 0");
  const std::size_t n = contour.grid.size();
  ChiOperator op(p, q, contour, cfg);
  std::vector<cplx> c0(n), cp(n), cm(n), rhs(n);
  double worst = 0.0;
  for (double t : t_samples) {
    if (t - h_t < 0.0) throw Error(ErrorCode::invalid_argument, "t_sample closer to 0 than h_t");
    for (std::size_t j = 0; j < n; ++j) {
      const cplx z = contour.point(j);
      c0[j] = chi(t, z);
      cp[j] = chi(t + h_t, z);
      cm[j] = chi(t - h_t, z);
    }
    const double scale = max_abs(c0);
    if (scale == 0.0) continue;
    op.apply(c0, rhs);
    double r = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      r = std::max(r, std::abs((cp[j] - cm[j]) / (2.0 * h_t) - rhs[j]));
    }
    worst = std::max(worst, r / scale);
  }
  return worst;
}

double edge_magnitude(std::span<const cplx> v) {
  const double scale = max_abs(v);
  if (scale == 0.0 || v.size() < 4) return 0.0;
  const std::size_t n = v.size();
  return std::max({std::abs(v[0]), std::abs(v[1]), std::abs(v[n - 2]), std::abs(v[n - 1])}) / scale;
}

}  // namespace openq
