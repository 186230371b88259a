// AVX2 kernel table. This TU is compiled with -mavx2 and only reached after a
// runtime cpuid check (see dispatch.cpp). Element-wise kernels mirror the
// scalar reference op for op: cvt, add, mul, div in the same order, no FMA,
// so results are bit-identical. Reductions use four accumulators and are
// equivalence-tested at 1e-12 relative tolerance instead.

#include "wntm/kernels.hpp"

#if defined(WNTM_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))

#include <immintrin.h>

namespace wntm::kernels {
namespace {

inline __m256d load_i32_as_pd(const std::int32_t* p) {
  return _mm256_cvtepi32_pd(_mm_loadu_si128(reinterpret_cast<const __m128i*>(p)));
}

void topic_weights_avx2(const std::int32_t* doc_topic, const std::int32_t* topic_word,
                        const std::int32_t* topic_total, double alpha, double beta,
                        double vbeta, double* out, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  const __m256d vb = _mm256_set1_pd(beta);
  const __m256d vvb = _mm256_set1_pd(vbeta);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d dt = _mm256_add_pd(load_i32_as_pd(doc_topic + i), va);
    __m256d tw = _mm256_add_pd(load_i32_as_pd(topic_word + i), vb);
    __m256d tt = _mm256_add_pd(load_i32_as_pd(topic_total + i), vvb);
    _mm256_storeu_pd(out + i, _mm256_div_pd(_mm256_mul_pd(dt, tw), tt));
  }
  for (; i < n; ++i) {
    out[i] = (static_cast<double>(doc_topic[i]) + alpha) *
             (static_cast<double>(topic_word[i]) + beta) /
             (static_cast<double>(topic_total[i]) + vbeta);
  }
}

void smoothed_row_avx2(const std::int32_t* counts, double prior, double denom,
                       double* out, std::size_t n) {
  const __m256d vp = _mm256_set1_pd(prior);
  const __m256d vd = _mm256_set1_pd(denom);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d c = _mm256_add_pd(load_i32_as_pd(counts + i), vp);
    _mm256_storeu_pd(out + i, _mm256_div_pd(c, vd));
  }
  for (; i < n; ++i) {
    out[i] = (static_cast<double>(counts[i]) + prior) / denom;
  }
}

void axpy_avx2(double a, const double* x, double* out, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d prod = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(out + i), prod));
  }
  for (; i < n; ++i) {
    out[i] += a * x[i];
  }
}

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4)));
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double sum_avx2(const double* a, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(a + i));
    acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(a + i + 4));
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += a[i];
  return acc;
}

constexpr Kernels kAvx2 = {
    "avx2",      topic_weights_avx2, smoothed_row_avx2,
    axpy_avx2,   dot_avx2,           sum_avx2,
};

}  // namespace

const Kernels* avx2_table() { return &kAvx2; }

}  // namespace wntm::kernels

#else

namespace wntm::kernels {
const Kernels* avx2_table() { return nullptr; }
}  // namespace wntm::kernels

#endif
