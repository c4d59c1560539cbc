#include "openq/states.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <iostream>
#include <mutex>
#include <numbers>
#include <string>

#include "openq/fft.hpp"
#include "openq/parallel.hpp"
#include "openq/propagator.hpp"

namespace openq {
namespace {

std::mutex g_warn_mutex;
WarningHandler g_warn = [](std::string_view msg) { std::cerr << "openq: warning: " << msg << '\n'; };

void check_conjugate(const SpectralState& s) {
  const auto expect = conjugate_wavenumbers(s.x);
  if (s.q.size() != expect.size() || s.chi.size() != s.x.size() * s.xd.size()) {
    throw Error(ErrorCode::grid_mismatch, "spectral state shape does not match its grids");
  }
  for (std::size_t j = 0; j < expect.size(); ++j) {
    if (std::abs(s.q[j] - expect[j]) > 1e-12 * (1.0 + std::abs(expect[j]))) {
      throw Error(ErrorCode::grid_mismatch, "q grid is not conjugate to the x grid");
    }
  }
  if (!s.analytic.empty() && s.analytic.size() != s.q.size()) {
    throw Error(ErrorCode::grid_mismatch, "analytic profile count differs from q grid");
  }
}

// Phase factors splitting e^{i q_j x_n} = post_n * pre_j * e^{2 pi i j n / N}.
struct FourierPhases {
  std::vector<cplx> pre;   // e^{i j dq x_0}
  std::vector<cplx> post;  // e^{i q_0 x_n}

  explicit FourierPhases(const Grid& x) : pre(x.size()), post(x.size()) {
    const double dq = 2.0 * std::numbers::pi / x.length();
    const double q0 = conjugate_wavenumbers(x).front();
    const double x0 = x.coordinate(0);
    for (std::size_t k = 0; k < x.size(); ++k) {
      pre[k] = std::polar(1.0, static_cast<double>(k) * dq * x0);
      post[k] = std::polar(1.0, q0 * x.coordinate(k));
    }
  }
};

std::size_t nearest_row(const Grid& g, double x) {
  const double r = std::round(x / g.spacing()) + static_cast<double>(g.origin_index());
  if (r < 0.0 || r >= static_cast<double>(g.size())) {
    throw Error(ErrorCode::domain_escape, "x outside the grid");
  }
  return static_cast<std::size_t>(r);
}

}  // namespace

WarningHandler set_warning_handler(WarningHandler h) {
  std::lock_guard lock(g_warn_mutex);
  auto old = std::move(g_warn);
  g_warn = std::move(h);
  return old;
}

void warn(std::string_view msg) {
  std::lock_guard lock(g_warn_mutex);
  if (g_warn) g_warn(msg);
}

std::vector<double> conjugate_wavenumbers(const Grid& x) {
  std::vector<double> q(x.size());
  const double dq = 2.0 * std::numbers::pi / x.length();
  for (std::size_t j = 0; j < q.size(); ++j) {
    q[j] = (static_cast<double>(j) - static_cast<double>(x.size() / 2)) * dq;
  }
  return q;
}

SpectralState::SpectralState(Grid x_, Grid xd_)
    : x(x_), xd(xd_), q(conjugate_wavenumbers(x_)), chi(x_.size() * xd_.size()) {}

double SpectralState::hermiticity_defect() const {
  const std::size_t nq = q.size(), nd = xd.size();
  double scale = 0.0, worst = 0.0;
  for (const auto& v : chi) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return 0.0;
  for (std::size_t j = 0; j < nq; ++j) {
    const std::size_t jr = x.reflect(j);
    for (std::size_t k = 0; k < nd; ++k) {
      const cplx a = chi[jr * nd + xd.reflect(k)];
      const cplx b = std::conj(chi[j * nd + k]);
      worst = std::max(worst, std::abs(a - b));
    }
  }
  return worst / scale;
}

SpectralState gaussian_spectral_state(const Grid& x, const Grid& xd, const GaussianStateSpec& spec) {
  if (!(spec.delta_q > 0.0) || !(spec.coherence > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "delta_q and coherence must be > 0");
  }
  SpectralState s(x, xd);
  const auto profile = GaussianPolynomial::gaussian(spec.coherence, 0.0, spec.carrier);
  s.analytic.reserve(s.q.size());
  for (std::size_t j = 0; j < s.q.size(); ++j) {
    const double w = std::exp(-s.q[j] * s.q[j] / (2.0 * spec.delta_q * spec.delta_q));
    s.analytic.push_back(profile.scaled(w));
    const auto samples = s.analytic.back().sample(xd);
    std::copy(samples.begin(), samples.end(), s.mode(j).begin());
  }
  return s;
}

DensityOperatorGrid synthesize(const SpectralState& s) {
  check_conjugate(s);
  const std::size_t nx = s.x.size(), nd = s.xd.size();
  const FourierPhases ph(s.x);
  std::vector<cplx> buf(s.chi);
  for (std::size_t j = 0; j < nx; ++j) {
    for (std::size_t k = 0; k < nd; ++k) buf[j * nd + k] *= ph.pre[j];
  }
  FftPlan(nx, nd, nd, 1).backward(buf);
  const double inv_l = 1.0 / s.x.length();
  for (std::size_t n = 0; n < nx; ++n) {
    const cplx f = ph.post[n] * inv_l;
    for (std::size_t k = 0; k < nd; ++k) buf[n * nd + k] *= f;
  }
  return DensityOperatorGrid(s.x, s.xd, std::move(buf), s.time);
}

SpectralState decompose(const DensityOperatorGrid& rho) {
  const std::size_t nx = rho.x.size(), nd = rho.xd.size();
  if (rho.values.size() != nx * nd) throw Error(ErrorCode::grid_mismatch, "rho shape");
  const FourierPhases ph(rho.x);
  SpectralState s(rho.x, rho.xd);
  s.time = rho.time;
  s.chi = rho.values;
  for (std::size_t n = 0; n < nx; ++n) {
    const cplx f = std::conj(ph.post[n]);
    for (std::size_t k = 0; k < nd; ++k) s.chi[n * nd + k] *= f;
  }
  FftPlan(nx, nd, nd, 1).forward(s.chi);
  const double h = rho.x.spacing();
  for (std::size_t j = 0; j < nx; ++j) {
    const cplx f = std::conj(ph.pre[j]) * h;
    for (std::size_t k = 0; k < nd; ++k) s.chi[j * nd + k] *= f;
  }
  return s;
}

SpectralState evolve_state(const SpectralState& s, const PhysicalParams& p, double t,
                           unsigned threads) {
  check_conjugate(s);
  if (!(t >= 0.0)) throw Error(ErrorCode::invalid_argument, "t must be >= 0");
  SpectralState out = s;
  out.time = s.time + t;
  if (t == 0.0) return out;

  const std::size_t nq = s.q.size();
  std::vector<std::string> failures(nq);
  parallel_for(nq, threads, [&](std::size_t j) {
    try {
      if (!s.analytic.empty()) {
        auto evolved = evolve_component(AnalyticComponent{s.q[j], s.analytic[j]}, p, t);
        const auto samples = evolved.chi.sample(s.xd);
        std::copy(samples.begin(), samples.end(), out.mode(j).begin());
        out.analytic[j] = std::move(evolved.chi);
      } else {
        const auto m = s.mode(j);
        ElementaryComponent c(s.q[j], s.xd, std::vector<cplx>(m.begin(), m.end()));
        const auto evolved = evolve_component(c, p, t);
        std::copy(evolved.chi.begin(), evolved.chi.end(), out.mode(j).begin());
      }
    } catch (const std::exception& e) {
      failures[j] = e.what();
    }
  });

  std::string msg;
  std::size_t count = 0;
  for (std::size_t j = 0; j < nq; ++j) {
    if (failures[j].empty()) continue;
    if (count++ < 4) msg += " mode " + std::to_string(j) + ": " + failures[j] + ";";
  }
  if (count > 0) {
    throw Error(ErrorCode::domain_escape,
                std::to_string(count) + " mode(s) failed to evolve:" + msg);
  }
  return out;
}

DensityOperatorGrid longtime_asymptote(const SpectralState& s, const PhysicalParams& p, double t) {
  check_conjugate(s);
  if (p.d0 == 0.0) {
    throw Error(ErrorCode::zero_decoherence, "the saddle-point form is singular at d0 = 0");
  }
  if (!(t > 0.0)) throw Error(ErrorCode::invalid_argument, "t must be > 0");
  const double kf = drift_wavevector(p);
  if (p.nu * t < 5.0) warn("long-time asymptote used at nu t = " + std::to_string(p.nu * t) + " < 5");
  const double vf = drift_velocity(p);
  const double d = decoherence_coefficient(p);
  const double diff = p.d0 * p.hbar / (2.0 * p.m * p.m * p.nu * p.nu);
  const double pref = p.m * p.nu / std::sqrt(2.0 * std::numbers::pi * p.d0 * p.hbar * t);
  const cplx chi00 = s.mode(s.zero_mode())[s.xd.origin_index()];

  DensityOperatorGrid out(s.x, s.xd);
  out.time = s.time + t;
  const cplx I(0.0, 1.0);
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    const double dx = s.x.coordinate(i) - vf * t;
    const double xfac = std::exp(-dx * dx / (4.0 * diff * t));
    for (std::size_t j = 0; j < s.xd.size(); ++j) {
      const double z = s.xd.coordinate(j);
      out.at(i, j) = pref * chi00 * xfac * std::exp(I * kf * z - 0.5 * d * z * z);
    }
  }
  return out;
}

cplx norm(const DensityOperatorGrid& rho) {
  const std::size_t j0 = rho.xd.origin_index();
  cplx sum = 0.0;
  for (std::size_t i = 0; i < rho.x.size(); ++i) sum += rho.at(i, j0);
  return sum * rho.x.spacing();
}

double momentum_expectation(const DensityOperatorGrid& rho, double hbar) {
  const cplx nrm = norm(rho);
  if (std::abs(nrm) == 0.0) throw Error(ErrorCode::zero_norm, "momentum of a zero-norm state");
  const std::size_t nd = rho.xd.size();
  std::vector<cplx> line(nd, 0.0), deriv(nd);
  for (std::size_t i = 0; i < rho.x.size(); ++i) {
    for (std::size_t j = 0; j < nd; ++j) line[j] += rho.at(i, j);
  }
  for (auto& v : line) v *= rho.x.spacing();
  SpectralDerivative(rho.xd).first(line, deriv);
  const cplx p = -cplx(0.0, 1.0) * hbar * deriv[rho.xd.origin_index()] / nrm;
  return p.real();
}

std::vector<double> position_density(const DensityOperatorGrid& rho) {
  const std::size_t j0 = rho.xd.origin_index();
  const double tol = 1e-8 * rho.max_abs();
  std::vector<double> out(rho.x.size());
  double worst_im = 0.0, worst_neg = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const cplx v = rho.at(i, j0);
    out[i] = v.real();
    worst_im = std::max(worst_im, std::abs(v.imag()));
    worst_neg = std::max(worst_neg, -v.real());
  }
  if (worst_im > tol) warn("position density has imaginary part " + std::to_string(worst_im));
  if (worst_neg > tol) warn("position density has negative values down to " + std::to_string(-worst_neg));
  return out;
}

double purity(const DensityOperatorGrid& rho) {
  cplx sum = 0.0;
  for (std::size_t i = 0; i < rho.x.size(); ++i) {
    for (std::size_t j = 0; j < rho.xd.size(); ++j) {
      sum += rho.at(i, j) * rho.at(i, rho.xd.reflect(j));
    }
  }
  return sum.real() * rho.x.spacing() * rho.xd.spacing();
}

double coherence_width(const DensityOperatorGrid& rho, double x) {
  const std::size_t i = nearest_row(rho.x, x);
  const std::size_t j0 = rho.xd.origin_index();
  const double ref = std::abs(rho.at(i, j0));
  if (ref == 0.0) throw Error(ErrorCode::fit_failure, "rho(x, 0) vanishes");

  std::vector<double> xs, ys;
  for (std::size_t j = 0; j < rho.xd.size(); ++j) {
    if (j == j0) continue;
    const double r = std::abs(rho.at(i, j)) / ref;
    if (!(r > 1e-10) || !std::isfinite(r)) continue;
    xs.push_back(rho.xd.coordinate(j));
    ys.push_back(-std::log(r));
  }
  if (xs.size() < 3) throw Error(ErrorCode::fit_failure, "too few resolvable points");

  Eigen::MatrixXd a(xs.size(), 2);
  Eigen::VectorXd b(xs.size());
  for (std::size_t k = 0; k < xs.size(); ++k) {
    a(k, 0) = xs[k];
    a(k, 1) = xs[k] * xs[k];
    b(k) = ys[k];
  }
  const Eigen::Vector2d c = a.colPivHouseholderQr().solve(b);
  const double rms = std::sqrt((a * c - b).squaredNorm() / static_cast<double>(xs.size()));
  if (rms > 1e-3 * std::max(1.0, b.cwiseAbs().maxCoeff())) {
    throw Error(ErrorCode::fit_failure, "envelope is not Gaussian (rms residual " +
                                            std::to_string(rms) + ")");
  }
  return c(1);
}

cplx product_norm(std::span<const DensityOperatorGrid> axes) {
  cplx out = 1.0;
  for (const auto& a : axes) out *= norm(a);
  return out;
}

}  // namespace openq
