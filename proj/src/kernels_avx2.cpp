// AVX2/FMA kernel variants. This translation unit is compiled with
// -mavx2 -mfma; callers must only reach it through the runtime dispatch.
#if defined(CARDEST_HAVE_AVX2)

#include <immintrin.h>

#include <cmath>
#include <cstring>

#include "kernels_impl.hpp"

namespace cardest::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d shuf = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}

}  // namespace

void gemm_nt(const double* a, const double* b, double* c,
             std::size_t m, std::size_t n, std::size_t k) {
    std::size_t i = 0;
    // 4 rows of A share each streamed row of B.
    for (; i + 4 <= m; i += 4) {
        const double* a0 = a + (i + 0) * k;
        const double* a1 = a + (i + 1) * k;
        const double* a2 = a + (i + 2) * k;
        const double* a3 = a + (i + 3) * k;
        for (std::size_t j = 0; j < n; ++j) {
            const double* br = b + j * k;
            __m256d acc0 = _mm256_setzero_pd();
            __m256d acc1 = _mm256_setzero_pd();
            __m256d acc2 = _mm256_setzero_pd();
            __m256d acc3 = _mm256_setzero_pd();
            std::size_t kk = 0;
            for (; kk + 4 <= k; kk += 4) {
                const __m256d bv = _mm256_loadu_pd(br + kk);
                acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a0 + kk), bv, acc0);
                acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a1 + kk), bv, acc1);
                acc2 = _mm256_fmadd_pd(_mm256_loadu_pd(a2 + kk), bv, acc2);
                acc3 = _mm256_fmadd_pd(_mm256_loadu_pd(a3 + kk), bv, acc3);
            }
            double s0 = hsum(acc0), s1 = hsum(acc1), s2 = hsum(acc2), s3 = hsum(acc3);
            for (; kk < k; ++kk) {
                const double bv = br[kk];
                s0 += a0[kk] * bv;
                s1 += a1[kk] * bv;
                s2 += a2[kk] * bv;
                s3 += a3[kk] * bv;
            }
            c[(i + 0) * n + j] = s0;
            c[(i + 1) * n + j] = s1;
            c[(i + 2) * n + j] = s2;
            c[(i + 3) * n + j] = s3;
        }
    }
    for (; i < m; ++i) {
        const double* arow = a + i * k;
        for (std::size_t j = 0; j < n; ++j) {
            const double* br = b + j * k;
            __m256d acc0 = _mm256_setzero_pd();
            __m256d acc1 = _mm256_setzero_pd();
            std::size_t kk = 0;
            for (; kk + 8 <= k; kk += 8) {
                acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(arow + kk), _mm256_loadu_pd(br + kk), acc0);
                acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(arow + kk + 4), _mm256_loadu_pd(br + kk + 4), acc1);
            }
            double s = hsum(_mm256_add_pd(acc0, acc1));
            for (; kk < k; ++kk) s += arow[kk] * br[kk];
            c[i * n + j] = s;
        }
    }
}

namespace {

// Shared register-tiled body for C = op(A) * B with row-major B and C.
// AIdx maps (row, k) to the element of A to broadcast.
template <typename AIdx>
inline void gemm_rowmajor_b(const double* a, const double* b, double* c,
                            std::size_t m, std::size_t n, std::size_t k, AIdx aidx) {
    std::size_t j = 0;
    for (; j + 8 <= n; j += 8) {
        std::size_t i = 0;
        for (; i + 4 <= m; i += 4) {
            __m256d c00 = _mm256_setzero_pd(), c01 = _mm256_setzero_pd();
            __m256d c10 = _mm256_setzero_pd(), c11 = _mm256_setzero_pd();
            __m256d c20 = _mm256_setzero_pd(), c21 = _mm256_setzero_pd();
            __m256d c30 = _mm256_setzero_pd(), c31 = _mm256_setzero_pd();
            for (std::size_t kk = 0; kk < k; ++kk) {
                const double* brow = b + kk * n + j;
                const __m256d b0 = _mm256_loadu_pd(brow);
                const __m256d b1 = _mm256_loadu_pd(brow + 4);
                const __m256d a0 = _mm256_set1_pd(a[aidx(i + 0, kk)]);
                const __m256d a1 = _mm256_set1_pd(a[aidx(i + 1, kk)]);
                const __m256d a2 = _mm256_set1_pd(a[aidx(i + 2, kk)]);
                const __m256d a3 = _mm256_set1_pd(a[aidx(i + 3, kk)]);
                c00 = _mm256_fmadd_pd(a0, b0, c00);
                c01 = _mm256_fmadd_pd(a0, b1, c01);
                c10 = _mm256_fmadd_pd(a1, b0, c10);
                c11 = _mm256_fmadd_pd(a1, b1, c11);
                c20 = _mm256_fmadd_pd(a2, b0, c20);
                c21 = _mm256_fmadd_pd(a2, b1, c21);
                c30 = _mm256_fmadd_pd(a3, b0, c30);
                c31 = _mm256_fmadd_pd(a3, b1, c31);
            }
            _mm256_storeu_pd(c + (i + 0) * n + j, c00);
            _mm256_storeu_pd(c + (i + 0) * n + j + 4, c01);
            _mm256_storeu_pd(c + (i + 1) * n + j, c10);
            _mm256_storeu_pd(c + (i + 1) * n + j + 4, c11);
            _mm256_storeu_pd(c + (i + 2) * n + j, c20);
            _mm256_storeu_pd(c + (i + 2) * n + j + 4, c21);
            _mm256_storeu_pd(c + (i + 3) * n + j, c30);
            _mm256_storeu_pd(c + (i + 3) * n + j + 4, c31);
        }
        for (; i < m; ++i) {
            __m256d c0 = _mm256_setzero_pd(), c1 = _mm256_setzero_pd();
            for (std::size_t kk = 0; kk < k; ++kk) {
                const double* brow = b + kk * n + j;
                const __m256d av = _mm256_set1_pd(a[aidx(i, kk)]);
                c0 = _mm256_fmadd_pd(av, _mm256_loadu_pd(brow), c0);
                c1 = _mm256_fmadd_pd(av, _mm256_loadu_pd(brow + 4), c1);
            }
            _mm256_storeu_pd(c + i * n + j, c0);
            _mm256_storeu_pd(c + i * n + j + 4, c1);
        }
    }
    // Column remainder, scalar.
    if (j < n) {
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t jj = j; jj < n; ++jj) c[i * n + jj] = 0.0;
        }
        for (std::size_t i = 0; i < m; ++i) {
            double* crow = c + i * n;
            for (std::size_t kk = 0; kk < k; ++kk) {
                const double av = a[aidx(i, kk)];
                const double* brow = b + kk * n;
                for (std::size_t jj = j; jj < n; ++jj) crow[jj] += av * brow[jj];
            }
        }
    }
}

}  // namespace

void gemm_nn(const double* a, const double* b, double* c,
             std::size_t m, std::size_t n, std::size_t k) {
    gemm_rowmajor_b(a, b, c, m, n, k,
                    [k](std::size_t row, std::size_t kk) { return row * k + kk; });
}

void gemm_tn(const double* a, const double* b, double* c,
             std::size_t m, std::size_t n, std::size_t k) {
    gemm_rowmajor_b(a, b, c, m, n, k,
                    [m](std::size_t row, std::size_t kk) { return kk * m + row; });
}

double sum_sq_diff(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4));
        acc0 = _mm256_fmadd_pd(d0, d0, acc0);
        acc1 = _mm256_fmadd_pd(d1, d1, acc1);
    }
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

void adam_update(double* w, double* moment1, double* moment2, const double* g,
                 std::size_t n, double lr, double beta1, double beta2,
                 double eps, double bias_corr1, double bias_corr2) {
    const __m256d vb1 = _mm256_set1_pd(beta1);
    const __m256d vb1c = _mm256_set1_pd(1.0 - beta1);
    const __m256d vb2 = _mm256_set1_pd(beta2);
    const __m256d vb2c = _mm256_set1_pd(1.0 - beta2);
    const __m256d vlr = _mm256_set1_pd(lr);
    const __m256d veps = _mm256_set1_pd(eps);
    const __m256d vbc1 = _mm256_set1_pd(bias_corr1);
    const __m256d vbc2 = _mm256_set1_pd(bias_corr2);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d gv = _mm256_loadu_pd(g + i);
        __m256d m1 = _mm256_loadu_pd(moment1 + i);
        __m256d m2 = _mm256_loadu_pd(moment2 + i);
        m1 = _mm256_fmadd_pd(vb1, m1, _mm256_mul_pd(vb1c, gv));
        m2 = _mm256_fmadd_pd(vb2, m2, _mm256_mul_pd(vb2c, _mm256_mul_pd(gv, gv)));
        _mm256_storeu_pd(moment1 + i, m1);
        _mm256_storeu_pd(moment2 + i, m2);
        const __m256d mhat = _mm256_div_pd(m1, vbc1);
        const __m256d vhat = _mm256_div_pd(m2, vbc2);
        const __m256d denom = _mm256_add_pd(_mm256_sqrt_pd(vhat), veps);
        const __m256d step = _mm256_div_pd(_mm256_mul_pd(vlr, mhat), denom);
        _mm256_storeu_pd(w + i, _mm256_sub_pd(_mm256_loadu_pd(w + i), step));
    }
    for (; i < n; ++i) {
        moment1[i] = beta1 * moment1[i] + (1.0 - beta1) * g[i];
        moment2[i] = beta2 * moment2[i] + (1.0 - beta2) * g[i] * g[i];
        const double mhat = moment1[i] / bias_corr1;
        const double vhat = moment2[i] / bias_corr2;
        w[i] -= lr * mhat / (std::sqrt(vhat) + eps);
    }
}

}  // namespace cardest::kernels::avx2

#endif  // CARDEST_HAVE_AVX2
