#include "wntm/kernels.hpp"

// Reference kernels. The SIMD variants must reproduce these element-wise
// results bit for bit; keep the expressions in sync with src/kernels/avx2.cpp.
// Compiled with -ffp-contract=off so no mul+add pair fuses into an FMA.

namespace wntm::kernels {
namespace {

void topic_weights_scalar(const std::int32_t* doc_topic, const std::int32_t* topic_word,
                          const std::int32_t* topic_total, double alpha, double beta,
                          double vbeta, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = (static_cast<double>(doc_topic[i]) + alpha) *
             (static_cast<double>(topic_word[i]) + beta) /
             (static_cast<double>(topic_total[i]) + vbeta);
  }
}

void smoothed_row_scalar(const std::int32_t* counts, double prior, double denom,
                         double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = (static_cast<double>(counts[i]) + prior) / denom;
  }
}

void axpy_scalar(double a, const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] += a * x[i];
  }
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double sum_scalar(const double* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i];
  return acc;
}

constexpr Kernels kScalar = {
    "scalar",          topic_weights_scalar, smoothed_row_scalar,
    axpy_scalar,       dot_scalar,           sum_scalar,
};

}  // namespace

const Kernels& scalar() { return kScalar; }

}  // namespace wntm::kernels
