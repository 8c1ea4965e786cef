// Runtime ISA dispatch for the compute kernels.
#include "cardest/kernels.hpp"

#include <atomic>

#include "kernels_impl.hpp"

namespace cardest::kernels {

namespace {

bool avx2_supported() {
#if defined(CARDEST_HAVE_AVX2)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

std::atomic<bool> g_force_scalar{false};

Isa resolve() {
    if (g_force_scalar.load(std::memory_order_relaxed)) return Isa::Scalar;
    return avx2_supported() ? Isa::Avx2 : Isa::Scalar;
}

}  // namespace

Isa active_isa() { return resolve(); }

const char* isa_name() { return resolve() == Isa::Avx2 ? "avx2" : "scalar"; }

void force_scalar(bool on) { g_force_scalar.store(on, std::memory_order_relaxed); }

void gemm_nt(const double* a, const double* b, double* c,
             std::size_t m, std::size_t n, std::size_t k) {
#if defined(CARDEST_HAVE_AVX2)
    if (resolve() == Isa::Avx2) return avx2::gemm_nt(a, b, c, m, n, k);
#endif
    scalar::gemm_nt(a, b, c, m, n, k);
}

void gemm_nn(const double* a, const double* b, double* c,
             std::size_t m, std::size_t n, std::size_t k) {
#if defined(CARDEST_HAVE_AVX2)
    if (resolve() == Isa::Avx2) return avx2::gemm_nn(a, b, c, m, n, k);
#endif
    scalar::gemm_nn(a, b, c, m, n, k);
}

void gemm_tn(const double* a, const double* b, double* c,
             std::size_t m, std::size_t n, std::size_t k) {
#if defined(CARDEST_HAVE_AVX2)
    if (resolve() == Isa::Avx2) return avx2::gemm_tn(a, b, c, m, n, k);
#endif
    scalar::gemm_tn(a, b, c, m, n, k);
}

double sum_sq_diff(const double* a, const double* b, std::size_t n) {
#if defined(CARDEST_HAVE_AVX2)
    if (resolve() == Isa::Avx2) return avx2::sum_sq_diff(a, b, n);
#endif
    return scalar::sum_sq_diff(a, b, n);
}

void adam_update(double* w, double* moment1, double* moment2, const double* g,
                 std::size_t n, double lr, double beta1, double beta2,
                 double eps, double bias_corr1, double bias_corr2) {
#if defined(CARDEST_HAVE_AVX2)
    if (resolve() == Isa::Avx2)
        return avx2::adam_update(w, moment1, moment2, g, n, lr, beta1, beta2, eps,
                                 bias_corr1, bias_corr2);
#endif
    scalar::adam_update(w, moment1, moment2, g, n, lr, beta1, beta2, eps, bias_corr1,
                        bias_corr2);
}

}  // namespace cardest::kernels
