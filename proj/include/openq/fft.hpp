#pragma once

#include <memory>
#include <span>
#include <vector>

#include "openq/domain.hpp"

namespace openq {

/// In-place complex FFT over `howmany` interleaved transforms of length `n`
/// (element k of transform b lives at b*dist + k*stride). Unnormalised;
/// backward(forward(x)) = n x.
class FftPlan {
 public:
  FftPlan(std::size_t n, std::size_t howmany = 1, std::size_t stride = 1, std::size_t dist = 0);
  ~FftPlan();
  FftPlan(FftPlan&&) noexcept;
  FftPlan& operator=(FftPlan&&) noexcept;
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  void forward(std::span<cplx> data) const;
  void backward(std::span<cplx> data) const;

  std::size_t size() const { return n_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::size_t n_;
  std::size_t span_;
};

/// Angular wavenumbers of FFT bin k for a periodic box of length L.
std::vector<double> fft_wavenumbers(std::size_t n, double length);

/// Spectral d/dx on a periodic grid. The Nyquist bin of odd derivatives is zeroed.
class SpectralDerivative {
 public:
  explicit SpectralDerivative(const Grid& grid);

  void first(std::span<const cplx> in, std::span<cplx> out) const;
  void second(std::span<const cplx> in, std::span<cplx> out) const;
  double max_wavenumber() const;

 private:
  FftPlan plan_;
  std::vector<double> k_;
  mutable std::vector<cplx> work_;
};

}  // namespace openq
