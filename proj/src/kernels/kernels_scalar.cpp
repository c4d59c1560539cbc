#include "kernels_impl.hpp"

namespace openq::kernels::scalar {
namespace {

void axpy(cplx* y, cplx a, const cplx* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void mul_acc(cplx* y, const cplx* a, const cplx* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a[i] * x[i];
}

void axpy_into(cplx* out, const cplx* y, cplx a, const cplx* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = y[i] + a * x[i];
}

void central_d1(cplx* out, const cplx* in, std::size_t n, double h, int order, bool periodic) {
  const long len = static_cast<long>(n);
  for (long i = 0; i < len; ++i) out[i] = detail::d1_point(in, len, i, h, order, periodic);
}

double squared_norm(const cplx* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::norm(x[i]);
  return s;
}

double squared_distance(const cplx* x, const cplx* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::norm(x[i] - y[i]);
  return s;
}

}  // namespace

const Table table{axpy, mul_acc, axpy_into, central_d1, squared_norm, squared_distance};

}  // namespace openq::kernels::scalar
