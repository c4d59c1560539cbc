#include <atomic>
#include <cstdlib>
#include <string>

#include "kernels_impl.hpp"

namespace openq::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(OPENQ_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend initial_backend() {
  if (const char* env = std::getenv("OPENQ_SIMD"); env && std::string(env) == "scalar") {
    return Backend::scalar;
  }
  return cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
}

std::atomic<Backend>& current() {
  static std::atomic<Backend> backend{initial_backend()};
  return backend;
}

const Table& active() { return table(current().load(std::memory_order_relaxed)); }

void check_same(std::size_t a, std::size_t b) {
  if (a != b) throw Error(ErrorCode::shape_mismatch, "kernel operand length mismatch");
}

}  // namespace

std::string_view to_string(Backend b) { return b == Backend::avx2 ? "avx2" : "scalar"; }

bool backend_available(Backend b) { return b == Backend::scalar || cpu_has_avx2(); }

Backend active_backend() { return current().load(); }

void force_backend(Backend b) {
  if (!backend_available(b)) {
    throw Error(ErrorCode::invalid_argument, "SIMD backend not available on this CPU");
  }
  current().store(b);
}

const Table& table(Backend b) {
#if defined(OPENQ_HAVE_AVX2_TU)
  if (b == Backend::avx2 && cpu_has_avx2()) return avx2::table;
#endif
  (void)b;
  return scalar::table;
}

void axpy(std::span<cplx> y, cplx a, std::span<const cplx> x) {
  check_same(y.size(), x.size());
  active().axpy(y.data(), a, x.data(), y.size());
}

void mul_acc(std::span<cplx> y, std::span<const cplx> a, std::span<const cplx> x) {
  check_same(y.size(), x.size());
  check_same(y.size(), a.size());
  active().mul_acc(y.data(), a.data(), x.data(), y.size());
}

void axpy_into(std::span<cplx> out, std::span<const cplx> y, cplx a, std::span<const cplx> x) {
  check_same(out.size(), x.size());
  check_same(out.size(), y.size());
  active().axpy_into(out.data(), y.data(), a, x.data(), out.size());
}

void central_d1(std::span<cplx> out, std::span<const cplx> in, double h, int order, bool periodic) {
  check_same(out.size(), in.size());
  if (order != 2 && order != 4) throw Error(ErrorCode::invalid_argument, "stencil order must be 2 or 4");
  active().central_d1(out.data(), in.data(), in.size(), h, order, periodic);
}

double squared_norm(std::span<const cplx> x) { return active().squared_norm(x.data(), x.size()); }

double squared_distance(std::span<const cplx> x, std::span<const cplx> y) {
  check_same(x.size(), y.size());
  return active().squared_distance(x.data(), y.data(), x.size());
}

}  // namespace openq::kernels
