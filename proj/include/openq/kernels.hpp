#pragma once

// Inner-loop arithmetic on interleaved complex<double> arrays.
//
// Every kernel has a portable scalar reference and, on x86-64, an AVX2+FMA
// variant. The variant is picked once at startup from the CPU's feature bits;
// OPENQ_SIMD=scalar in the environment (or force_backend) pins the reference.

#include <span>
#include <string_view>

#include "openq/domain.hpp"

namespace openq::kernels {

enum class Backend { scalar, avx2 };

std::string_view to_string(Backend b);
bool backend_available(Backend b);
Backend active_backend();
/// Overrides the runtime choice. Throws if `b` is not available on this CPU.
void force_backend(Backend b);

/// y += a * x
void axpy(std::span<cplx> y, cplx a, std::span<const cplx> x);
/// y += a (.) x, elementwise complex product
void mul_acc(std::span<cplx> y, std::span<const cplx> a, std::span<const cplx> x);
/// out = y + a * x
void axpy_into(std::span<cplx> out, std::span<const cplx> y, cplx a, std::span<const cplx> x);
/// Central finite-difference d/dx of order 2 or 4. Points outside the array
/// are taken as zero (clamped) or wrapped (periodic).
void central_d1(std::span<cplx> out, std::span<const cplx> in, double h, int order, bool periodic);
/// sum |x_i|^2
double squared_norm(std::span<const cplx> x);
/// sum |x_i - y_i|^2
double squared_distance(std::span<const cplx> x, std::span<const cplx> y);

/// Function table for one backend; exposed so tests can run variants side by side.
struct Table {
  void (*axpy)(cplx*, cplx, const cplx*, std::size_t);
  void (*mul_acc)(cplx*, const cplx*, const cplx*, std::size_t);
  void (*axpy_into)(cplx*, const cplx*, cplx, const cplx*, std::size_t);
  void (*central_d1)(cplx*, const cplx*, std::size_t, double, int, bool);
  double (*squared_norm)(const cplx*, std::size_t);
  double (*squared_distance)(const cplx*, const cplx*, std::size_t);
};

const Table& table(Backend b);

}  // namespace openq::kernels
