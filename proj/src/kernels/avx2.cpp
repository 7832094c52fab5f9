// AVX2 + FMA kernels. Compiled with -mavx2 -mfma; only reached after the
// dispatcher has confirmed CPU support.

#include <immintrin.h>

#include <cstring>

#include "backends.hpp"

namespace forage::kernels::detail {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d swapped = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

inline __m256d wrap(__m256d d, __m256d extent, __m256d half, __m256d neg_half) {
  const __m256d over = _mm256_cmp_pd(d, half, _CMP_GT_OQ);
  const __m256d under = _mm256_cmp_pd(d, neg_half, _CMP_LT_OQ);
  d = _mm256_blendv_pd(d, _mm256_sub_pd(d, extent), over);
  return _mm256_blendv_pd(d, _mm256_add_pd(d, extent), under);
}

// Four active bytes -> all-ones lanes where the byte is nonzero.
inline __m256d active_mask(const std::uint8_t* p) {
  std::int32_t bytes;
  std::memcpy(&bytes, p, sizeof(bytes));
  const __m256i wide = _mm256_cvtepu8_epi64(_mm_cvtsi32_si128(bytes));
  const __m256i zero = _mm256_cmpeq_epi64(wide, _mm256_setzero_si256());
  return _mm256_castsi256_pd(_mm256_xor_si256(zero, _mm256_set1_epi64x(-1)));
}

void matvec_add(const double* w, const double* x, double* y, std::size_t rows,
                std::size_t cols) {
  for (std::size_t i = 0; i < rows; ++i) {
    const double* row = w + i * cols;
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t j = 0;
    for (; j + 8 <= cols; j += 8) {
      acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(row + j), _mm256_loadu_pd(x + j), acc0);
      acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(row + j + 4), _mm256_loadu_pd(x + j + 4), acc1);
    }
    if (j + 4 <= cols) {
      acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(row + j), _mm256_loadu_pd(x + j), acc0);
      j += 4;
    }
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; j < cols; ++j) acc += row[j] * x[j];
    y[i] += acc;
  }
}

// Same operation sequence as the scalar reference, without FMA, so the
// weights match it bit for bit.
void pair_weights(double cx, double cy, const double* xs, const double* ys,
                  const std::uint8_t* active, std::size_t n, const Metric& metric,
                  const KernelShape& shape, double* out) {
  const __m256d vcx = _mm256_set1_pd(cx);
  const __m256d vcy = _mm256_set1_pd(cy);
  const __m256d w = _mm256_set1_pd(metric.width);
  const __m256d h = _mm256_set1_pd(metric.height);
  const __m256d hw = _mm256_set1_pd(0.5 * metric.width);
  const __m256d hh = _mm256_set1_pd(0.5 * metric.height);
  const __m256d nhw = _mm256_set1_pd(-(0.5 * metric.width));
  const __m256d nhh = _mm256_set1_pd(-(0.5 * metric.height));
  const __m256d gain = _mm256_set1_pd(shape.gain);
  const __m256d scale_sq = _mm256_set1_pd(shape.scale_sq);
  const __m256d cutoff_sq = _mm256_set1_pd(shape.cutoff_sq);
  const __m256d one = _mm256_set1_pd(1.0);

  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d dx = _mm256_sub_pd(vcx, _mm256_loadu_pd(xs + i));
    __m256d dy = _mm256_sub_pd(vcy, _mm256_loadu_pd(ys + i));
    if (metric.periodic) {
      dx = wrap(dx, w, hw, nhw);
      dy = wrap(dy, h, hh, nhh);
    }
    const __m256d d2 = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
    const __m256d k = _mm256_div_pd(gain, _mm256_add_pd(one, _mm256_div_pd(d2, scale_sq)));
    const __m256d inside = _mm256_cmp_pd(d2, cutoff_sq, _CMP_LE_OQ);
    const __m256d keep = _mm256_and_pd(inside, active_mask(active + i));
    _mm256_storeu_pd(out + i, _mm256_and_pd(k, keep));
  }
  for (; i < n; ++i) {
    if (!active[i]) {
      out[i] = 0.0;
      continue;
    }
    double dx = cx - xs[i];
    double dy = cy - ys[i];
    if (metric.periodic) {
      dx = wrap_delta(dx, metric.width);
      dy = wrap_delta(dy, metric.height);
    }
    const double d2 = dx * dx + dy * dy;
    out[i] = d2 <= shape.cutoff_sq ? shape.gain / (1.0 + d2 / shape.scale_sq) : 0.0;
  }
}

FieldSample field(double cx, double cy, const double* xs, const double* ys, const double* values,
                  std::size_t n, const Metric& metric, const KernelShape& shape) {
  const __m256d vcx = _mm256_set1_pd(cx);
  const __m256d vcy = _mm256_set1_pd(cy);
  const __m256d w = _mm256_set1_pd(metric.width);
  const __m256d h = _mm256_set1_pd(metric.height);
  const __m256d hw = _mm256_set1_pd(0.5 * metric.width);
  const __m256d hh = _mm256_set1_pd(0.5 * metric.height);
  const __m256d nhw = _mm256_set1_pd(-(0.5 * metric.width));
  const __m256d nhh = _mm256_set1_pd(-(0.5 * metric.height));
  const __m256d scale_sq = _mm256_set1_pd(shape.scale_sq);
  const __m256d cutoff_sq = _mm256_set1_pd(shape.cutoff_sq);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d minus_two_over_s2 = _mm256_set1_pd(-2.0 / shape.scale_sq);

  __m256d sig = _mm256_setzero_pd();
  __m256d gx = _mm256_setzero_pd();
  __m256d gy = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d dx = _mm256_sub_pd(vcx, _mm256_loadu_pd(xs + i));
    __m256d dy = _mm256_sub_pd(vcy, _mm256_loadu_pd(ys + i));
    if (metric.periodic) {
      dx = wrap(dx, w, hw, nhw);
      dy = wrap(dy, h, hh, nhh);
    }
    const __m256d d2 = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
    const __m256d inside = _mm256_cmp_pd(d2, cutoff_sq, _CMP_LE_OQ);
    const __m256d q = _mm256_div_pd(one, _mm256_add_pd(one, _mm256_div_pd(d2, scale_sq)));
    const __m256d vq = _mm256_and_pd(_mm256_mul_pd(_mm256_loadu_pd(values + i), q), inside);
    const __m256d coef = _mm256_mul_pd(_mm256_mul_pd(vq, q), minus_two_over_s2);
    sig = _mm256_add_pd(sig, vq);
    gx = _mm256_fmadd_pd(coef, dx, gx);
    gy = _mm256_fmadd_pd(coef, dy, gy);
  }
  FieldSample f{hsum(sig), hsum(gx), hsum(gy)};
  for (; i < n; ++i) {
    double dx = cx - xs[i];
    double dy = cy - ys[i];
    if (metric.periodic) {
      dx = wrap_delta(dx, metric.width);
      dy = wrap_delta(dy, metric.height);
    }
    const double d2 = dx * dx + dy * dy;
    if (d2 > shape.cutoff_sq) continue;
    const double q = 1.0 / (1.0 + d2 / shape.scale_sq);
    const double vq = values[i] * q;
    const double coef = -2.0 * vq * q / shape.scale_sq;
    f.signal += vq;
    f.grad_x += coef * dx;
    f.grad_y += coef * dy;
  }
  return f;
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable table{"avx2", &matvec_add, &pair_weights, &field};
  return table;
}

}  // namespace forage::kernels::detail
