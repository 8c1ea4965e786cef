// Internal declarations of the per-ISA kernel variants.
#pragma once

#include <cstddef>

namespace cardest::kernels {

namespace scalar {
void gemm_nt(const double* a, const double* b, double* c, std::size_t m, std::size_t n, std::size_t k);
void gemm_nn(const double* a, const double* b, double* c, std::size_t m, std::size_t n, std::size_t k);
void gemm_tn(const double* a, const double* b, double* c, std::size_t m, std::size_t n, std::size_t k);
double sum_sq_diff(const double* a, const double* b, std::size_t n);
void adam_update(double* w, double* moment1, double* moment2, const double* g, std::size_t n,
                 double lr, double beta1, double beta2, double eps, double bias_corr1, double bias_corr2);
}  // namespace scalar

#if defined(CARDEST_HAVE_AVX2)
namespace avx2 {
void gemm_nt(const double* a, const double* b, double* c, std::size_t m, std::size_t n, std::size_t k);
void gemm_nn(const double* a, const double* b, double* c, std::size_t m, std::size_t n, std::size_t k);
void gemm_tn(const double* a, const double* b, double* c, std::size_t m, std::size_t n, std::size_t k);
double sum_sq_diff(const double* a, const double* b, std::size_t n);
void adam_update(double* w, double* moment1, double* moment2, const double* g, std::size_t n,
                 double lr, double beta1, double beta2, double eps, double bias_corr1, double bias_corr2);
}  // namespace avx2
#endif

}  // namespace cardest::kernels
