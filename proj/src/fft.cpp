#include "openq/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>

namespace openq {
namespace {

// FFTW's planner is not re-entrant; execution of existing plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

struct FftPlan::Impl {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;

  ~Impl() {
    std::lock_guard lock(planner_mutex());
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
  }
};

FftPlan::FftPlan(std::size_t n, std::size_t howmany, std::size_t stride, std::size_t dist)
    : impl_(std::make_unique<Impl>()), n_(n) {
  if (n == 0 || howmany == 0 || stride == 0) {
    throw Error(ErrorCode::invalid_argument, "empty FFT plan");
  }
  if (dist == 0) dist = n * stride;
  span_ = (howmany - 1) * dist + (n - 1) * stride + 1;
  std::vector<cplx> scratch(span_);
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  const int len = static_cast<int>(n);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  std::lock_guard lock(planner_mutex());
  impl_->fwd = fftw_plan_many_dft(1, &len, static_cast<int>(howmany), buf, nullptr,
                                  static_cast<int>(stride), static_cast<int>(dist), buf, nullptr,
                                  static_cast<int>(stride), static_cast<int>(dist), FFTW_FORWARD,
                                  flags);
  impl_->bwd = fftw_plan_many_dft(1, &len, static_cast<int>(howmany), buf, nullptr,
                                  static_cast<int>(stride), static_cast<int>(dist), buf, nullptr,
                                  static_cast<int>(stride), static_cast<int>(dist), FFTW_BACKWARD,
                                  flags);
  if (!impl_->fwd || !impl_->bwd) throw Error(ErrorCode::invalid_argument, "FFTW planning failed");
}

FftPlan::~FftPlan() = default;
FftPlan::FftPlan(FftPlan&&) noexcept = default;
FftPlan& FftPlan::operator=(FftPlan&&) noexcept = default;

void FftPlan::forward(std::span<cplx> data) const {
  if (data.size() < span_) throw Error(ErrorCode::shape_mismatch, "FFT buffer too small");
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(impl_->fwd, buf, buf);
}

void FftPlan::backward(std::span<cplx> data) const {
  if (data.size() < span_) throw Error(ErrorCode::shape_mismatch, "FFT buffer too small");
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(impl_->bwd, buf, buf);
}

std::vector<double> fft_wavenumbers(std::size_t n, double length) {
  std::vector<double> k(n);
  const double base = 2.0 * std::numbers::pi / length;
  for (std::size_t i = 0; i < n; ++i) {
    const long j = i < (n + 1) / 2 ? static_cast<long>(i) : static_cast<long>(i) - static_cast<long>(n);
    k[i] = base * static_cast<double>(j);
  }
  return k;
}

SpectralDerivative::SpectralDerivative(const Grid& grid)
    : plan_(grid.size()), k_(fft_wavenumbers(grid.size(), grid.length())), work_(grid.size()) {}

void SpectralDerivative::first(std::span<const cplx> in, std::span<cplx> out) const {
  const std::size_t n = k_.size();
  if (in.size() != n || out.size() != n) throw Error(ErrorCode::shape_mismatch, "derivative size");
  std::copy(in.begin(), in.end(), work_.begin());
  plan_.forward(work_);
  const double inv = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) work_[i] *= cplx(0.0, k_[i] * inv);
  if (n % 2 == 0) work_[n / 2] = 0.0;
  plan_.backward(work_);
  std::copy(work_.begin(), work_.end(), out.begin());
}

void SpectralDerivative::second(std::span<const cplx> in, std::span<cplx> out) const {
  const std::size_t n = k_.size();
  if (in.size() != n || out.size() != n) throw Error(ErrorCode::shape_mismatch, "derivative size");
  std::copy(in.begin(), in.end(), work_.begin());
  plan_.forward(work_);
  const double inv = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) work_[i] *= -k_[i] * k_[i] * inv;
  plan_.backward(work_);
  std::copy(work_.begin(), work_.end(), out.begin());
}

double SpectralDerivative::max_wavenumber() const {
  return std::abs(k_[1]) * static_cast<double>(k_.size() / 2);
}

}  // namespace openq
