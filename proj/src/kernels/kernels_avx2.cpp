// Compiled with -mavx2 -mfma; only reached through the dispatcher after a CPU check.
#include <immintrin.h>

#include "kernels_impl.hpp"

namespace openq::kernels::avx2 {
namespace {

// Two complex numbers per register: [re0, im0, re1, im1].
inline __m256d cmul(__m256d a, __m256d x) {
  const __m256d a_re = _mm256_movedup_pd(a);
  const __m256d a_im = _mm256_permute_pd(a, 0xF);
  const __m256d x_sw = _mm256_permute_pd(x, 0x5);
  return _mm256_fmaddsub_pd(a_re, x, _mm256_mul_pd(a_im, x_sw));
}

inline __m256d broadcast(cplx a) { return _mm256_setr_pd(a.real(), a.imag(), a.real(), a.imag()); }

inline double* raw(cplx* p) { return reinterpret_cast<double*>(p); }
inline const double* raw(const cplx* p) { return reinterpret_cast<const double*>(p); }

void axpy(cplx* y, cplx a, const cplx* x, std::size_t n) {
  const __m256d av = broadcast(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(raw(x + i));
    const __m256d yv = _mm256_loadu_pd(raw(y + i));
    _mm256_storeu_pd(raw(y + i), _mm256_add_pd(yv, cmul(av, xv)));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void mul_acc(cplx* y, const cplx* a, const cplx* x, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d av = _mm256_loadu_pd(raw(a + i));
    const __m256d xv = _mm256_loadu_pd(raw(x + i));
    const __m256d yv = _mm256_loadu_pd(raw(y + i));
    _mm256_storeu_pd(raw(y + i), _mm256_add_pd(yv, cmul(av, xv)));
  }
  for (; i < n; ++i) y[i] += a[i] * x[i];
}

void axpy_into(cplx* out, const cplx* y, cplx a, const cplx* x, std::size_t n) {
  const __m256d av = broadcast(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(raw(x + i));
    const __m256d yv = _mm256_loadu_pd(raw(y + i));
    _mm256_storeu_pd(raw(out + i), _mm256_add_pd(yv, cmul(av, xv)));
  }
  for (; i < n; ++i) out[i] = y[i] + a * x[i];
}

void central_d1(cplx* out, const cplx* in, std::size_t n, double h, int order, bool periodic) {
  const long len = static_cast<long>(n);
  const long reach = order == 2 ? 1 : 2;
  if (len < 2 * reach + 2) {
    for (long i = 0; i < len; ++i) out[i] = detail::d1_point(in, len, i, h, order, periodic);
    return;
  }
  for (long i = 0; i < reach; ++i) out[i] = detail::d1_point(in, len, i, h, order, periodic);
  long i = reach;
  const double* src = raw(in);
  if (order == 2) {
    const __m256d scale = _mm256_set1_pd(0.5 / h);
    for (; i + 2 <= len - reach; i += 2) {
      const __m256d p1 = _mm256_loadu_pd(src + 2 * (i + 1));
      const __m256d m1 = _mm256_loadu_pd(src + 2 * (i - 1));
      _mm256_storeu_pd(raw(out + i), _mm256_mul_pd(_mm256_sub_pd(p1, m1), scale));
    }
  } else {
    const __m256d eight = _mm256_set1_pd(8.0);
    const __m256d scale = _mm256_set1_pd(1.0 / (12.0 * h));
    for (; i + 2 <= len - reach; i += 2) {
      const __m256d a = _mm256_sub_pd(_mm256_loadu_pd(src + 2 * (i + 1)),
                                      _mm256_loadu_pd(src + 2 * (i - 1)));
      const __m256d b = _mm256_sub_pd(_mm256_loadu_pd(src + 2 * (i + 2)),
                                      _mm256_loadu_pd(src + 2 * (i - 2)));
      _mm256_storeu_pd(raw(out + i), _mm256_mul_pd(_mm256_sub_pd(_mm256_mul_pd(eight, a), b), scale));
    }
  }
  for (; i < len; ++i) out[i] = detail::d1_point(in, len, i, h, order, periodic);
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double squared_norm(const cplx* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d v = _mm256_loadu_pd(raw(x + i));
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += std::norm(x[i]);
  return s;
}

double squared_distance(const cplx* x, const cplx* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d v = _mm256_sub_pd(_mm256_loadu_pd(raw(x + i)), _mm256_loadu_pd(raw(y + i)));
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += std::norm(x[i] - y[i]);
  return s;
}

}  // namespace

const Table table{axpy, mul_acc, axpy_into, central_d1, squared_norm, squared_distance};

}  // namespace openq::kernels::avx2
