// Double-precision compute kernels for the dense-network hot path.
//
// Every kernel has a scalar reference implementation and, on x86-64, an
// AVX2/FMA variant selected at runtime. SIMD results may differ from scalar
// results only by floating-point reassociation; equivalence is enforced by
// tests/test_kernels.cpp.
#pragma once

#include <cstddef>

namespace cardest::kernels {

enum class Isa { Scalar, Avx2 };

/// Instruction set the dispatch currently resolves to.
Isa active_isa();
const char* isa_name();

/// Force the scalar reference path (for tests and A/B timing). Passing false
/// restores the detected best path.
void force_scalar(bool on);

// C[m x n] = A[m x k] * B[n x k]^T        (all row-major, C overwritten)
void gemm_nt(const double* a, const double* b, double* c,
             std::size_t m, std::size_t n, std::size_t k);

// C[m x n] = A[m x k] * B[k x n]          (row-major, C overwritten)
void gemm_nn(const double* a, const double* b, double* c,
             std::size_t m, std::size_t n, std::size_t k);

// C[m x n] = A[k x m]^T * B[k x n]        (row-major, C overwritten)
void gemm_tn(const double* a, const double* b, double* c,
             std::size_t m, std::size_t n, std::size_t k);

/// Sum of squared differences, sum_i (a[i] - b[i])^2.
double sum_sq_diff(const double* a, const double* b, std::size_t n);

/// One Adam step over n parameters:
///   m here are first moments, v second moments, g the gradient.
///   m = b1*m + (1-b1)*g;  v = b2*v + (1-b2)*g^2
///   w -= lr * (m / bc1) / (sqrt(v / bc2) + eps)
/// bc1/bc2 are the bias-correction factors 1 - b^t for the current step.
void adam_update(double* w, double* moment1, double* moment2, const double* g,
                 std::size_t n, double lr, double beta1, double beta2,
                 double eps, double bias_corr1, double bias_corr2);

}  // namespace cardest::kernels
