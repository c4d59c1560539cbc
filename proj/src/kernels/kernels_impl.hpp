#pragma once

#include "openq/kernels.hpp"

namespace openq::kernels {

namespace scalar {
extern const Table table;
}
#if defined(OPENQ_HAVE_AVX2_TU)
namespace avx2 {
extern const Table table;
}
#endif

namespace detail {

// Boundary points of the central stencils; shared by every backend so the
// edge treatment is bit-identical.
inline cplx fetch(const cplx* in, long n, long i, bool periodic) {
  if (i >= 0 && i < n) return in[i];
  if (!periodic) return cplx(0.0);
  return in[((i % n) + n) % n];
}

inline cplx d1_point(const cplx* in, long n, long i, double h, int order, bool periodic) {
  if (order == 2) {
    return (fetch(in, n, i + 1, periodic) - fetch(in, n, i - 1, periodic)) * (0.5 / h);
  }
  const cplx a = fetch(in, n, i + 1, periodic) - fetch(in, n, i - 1, periodic);
  const cplx b = fetch(in, n, i + 2, periodic) - fetch(in, n, i - 2, periodic);
  return (8.0 * a - b) * (1.0 / (12.0 * h));
}

}  // namespace detail
}  // namespace openq::kernels
