#include <immintrin.h>

#include <cmath>
#include <cstddef>

#include "wecfarm/kernels.hpp"

// Compiled with -mavx2 only; callers reach these through the dispatcher, which
// checks CPUID first.

namespace wecfarm::kernels::avx2 {
namespace {

inline double horizontal_sum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

void complex_sub_scaled(std::span<cplx> y, cplx a, std::span<const cplx> x) {
  const std::size_t n = y.size();
  auto* yp = reinterpret_cast<double*>(y.data());
  const auto* xp = reinterpret_cast<const double*>(x.data());
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  std::size_t k = 0;
  // two complex numbers per register: [re0, im0, re1, im1]
  for (; k + 2 <= n; k += 2) {
    const __m256d xv = _mm256_loadu_pd(xp + 2 * k);
    const __m256d swapped = _mm256_permute_pd(xv, 0b0101);
    const __m256d t1 = _mm256_mul_pd(ar, xv);
    const __m256d t2 = _mm256_mul_pd(ai, swapped);
    const __m256d prod = _mm256_addsub_pd(t1, t2);
    const __m256d yv = _mm256_loadu_pd(yp + 2 * k);
    _mm256_storeu_pd(yp + 2 * k, _mm256_sub_pd(yv, prod));
  }
  if (k < n) scalar::complex_sub_scaled(y.subspan(k), a, x.subspan(k));
}

cplx complex_dot(std::span<const cplx> a, std::span<const cplx> x) {
  const std::size_t n = a.size();
  const auto* ap = reinterpret_cast<const double*>(a.data());
  const auto* xp = reinterpret_cast<const double*>(x.data());
  __m256d acc_rr = _mm256_setzero_pd();  // [ar*xr, ai*xi, ...]
  __m256d acc_ri = _mm256_setzero_pd();  // [ar*xi, ai*xr, ...]
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m256d av = _mm256_loadu_pd(ap + 2 * k);
    const __m256d xv = _mm256_loadu_pd(xp + 2 * k);
    acc_rr = _mm256_add_pd(acc_rr, _mm256_mul_pd(av, xv));
    acc_ri = _mm256_add_pd(acc_ri, _mm256_mul_pd(av, _mm256_permute_pd(xv, 0b0101)));
  }
  alignas(32) double rr[4];
  alignas(32) double ri[4];
  _mm256_store_pd(rr, acc_rr);
  _mm256_store_pd(ri, acc_ri);
  double re = (rr[0] - rr[1]) + (rr[2] - rr[3]);
  double im = (ri[0] + ri[1]) + (ri[2] + ri[3]);
  if (k < n) {
    const cplx tail = scalar::complex_dot(a.subspan(k), x.subspan(k));
    re += tail.real();
    im += tail.imag();
  }
  return {re, im};
}

double weighted_norm_sq(std::span<const double> w, std::span<const cplx> x) {
  const std::size_t n = w.size();
  const auto* xp = reinterpret_cast<const double*>(x.data());
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m256d xv = _mm256_loadu_pd(xp + 2 * k);
    // [w0, w0, w1, w1]
    const __m128d wpair = _mm_loadu_pd(w.data() + k);
    const __m256d wv = _mm256_permute4x64_pd(_mm256_castpd128_pd256(wpair), 0b01010000);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(wv, _mm256_mul_pd(xv, xv)));
  }
  double sum = horizontal_sum(acc);
  if (k < n) sum += scalar::weighted_norm_sq(w.subspan(k), x.subspan(k));
  return sum;
}

void distances_from(double px, double py, std::span<const double> xs,
                    std::span<const double> ys, std::span<double> out) {
  const std::size_t n = xs.size();
  const __m256d pxv = _mm256_set1_pd(px);
  const __m256d pyv = _mm256_set1_pd(py);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(xs.data() + k), pxv);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(ys.data() + k), pyv);
    const __m256d d2 = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
    _mm256_storeu_pd(out.data() + k, _mm256_sqrt_pd(d2));
  }
  if (k < n) scalar::distances_from(px, py, xs.subspan(k), ys.subspan(k), out.subspan(k));
}

double shortfall_sum(std::span<const double> xs, std::span<const double> ys,
                     double min_dist) {
  const std::size_t n = xs.size();
  const __m256d limit = _mm256_set1_pd(min_dist);
  const __m256d zero = _mm256_setzero_pd();
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const __m256d xi = _mm256_set1_pd(xs[i]);
    const __m256d yi = _mm256_set1_pd(ys[i]);
    __m256d acc = _mm256_setzero_pd();
    std::size_t j = i + 1;
    for (; j + 4 <= n; j += 4) {
      const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(xs.data() + j), xi);
      const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(ys.data() + j), yi);
      const __m256d d = _mm256_sqrt_pd(
          _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)));
      acc = _mm256_add_pd(acc, _mm256_max_pd(_mm256_sub_pd(limit, d), zero));
    }
    sum += horizontal_sum(acc);
    for (; j < n; ++j) {
      const double dx = xs[j] - xs[i];
      const double dy = ys[j] - ys[i];
      const double d = std::sqrt(dx * dx + dy * dy);
      if (d < min_dist) sum += min_dist - d;
    }
  }
  return sum;
}

}  // namespace wecfarm::kernels::avx2
