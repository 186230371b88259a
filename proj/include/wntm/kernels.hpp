#pragma once

#include <cstddef>
#include <cstdint>

namespace wntm::kernels {

/// A table of inner-loop kernels. Element-wise kernels (topic_weights,
/// smoothed_row, axpy) are bit-exact across implementations: every output
/// element is produced by the same sequence of IEEE operations in the scalar
/// and SIMD paths, so sampler output does not depend on which table is
/// dispatched. Reduction kernels (dot, sum) may re-associate and are held to
/// a relative tolerance instead.
struct Kernels {
  const char* name;

  /// out[i] = (doc_topic[i] + alpha) * (topic_word[i] + beta) / (topic_total[i] + vbeta)
  void (*topic_weights)(const std::int32_t* doc_topic, const std::int32_t* topic_word,
                        const std::int32_t* topic_total, double alpha, double beta,
                        double vbeta, double* out, std::size_t n);

  /// out[i] = (counts[i] + prior) / denom
  void (*smoothed_row)(const std::int32_t* counts, double prior, double denom,
                       double* out, std::size_t n);

  /// out[i] += a * x[i]
  void (*axpy)(double a, const double* x, double* out, std::size_t n);

  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*sum)(const double* a, std::size_t n);
};

/// Scalar reference implementation. Always available.
const Kernels& scalar();

/// AVX2 implementation, or nullptr when unsupported at build or run time.
const Kernels* avx2();

/// Best table for this machine: AVX2 when available, scalar otherwise.
const Kernels& active();

}  // namespace wntm::kernels
