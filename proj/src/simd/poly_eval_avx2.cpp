#include "ebm/simd/poly_eval.hpp"

#include <cstddef>

#if defined(__AVX2__)
#include <immintrin.h>
#endif

namespace ebm::simd::detail {

#if defined(__AVX2__)

void eval_poly_avx2(const double* coeffs, int n_coeffs, const double* xs, double* out,
                    std::size_t n)
{
    std::size_t i = 0;
    // two independent accumulators hide the mul/add latency chain
    for (; i + 8 <= n; i += 8)
    {
        const __m256d x0 = _mm256_loadu_pd(xs + i);
        const __m256d x1 = _mm256_loadu_pd(xs + i + 4);
        __m256d a0 = _mm256_setzero_pd();
        __m256d a1 = _mm256_setzero_pd();
        for (int k = n_coeffs - 1; k >= 0; --k)
        {
            const __m256d c = _mm256_set1_pd(coeffs[k]);
            a0 = _mm256_add_pd(_mm256_mul_pd(a0, x0), c);
            a1 = _mm256_add_pd(_mm256_mul_pd(a1, x1), c);
        }
        _mm256_storeu_pd(out + i, a0);
        _mm256_storeu_pd(out + i + 4, a1);
    }
    for (; i + 4 <= n; i += 4)
    {
        const __m256d x0 = _mm256_loadu_pd(xs + i);
        __m256d a0 = _mm256_setzero_pd();
        for (int k = n_coeffs - 1; k >= 0; --k)
            a0 = _mm256_add_pd(_mm256_mul_pd(a0, x0), _mm256_set1_pd(coeffs[k]));
        _mm256_storeu_pd(out + i, a0);
    }
    eval_poly_scalar(coeffs, n_coeffs, xs + i, out + i, n - i);
}

#else

void eval_poly_avx2(const double* coeffs, int n_coeffs, const double* xs, double* out,
                    std::size_t n)
{
    eval_poly_scalar(coeffs, n_coeffs, xs, out, n);
}

#endif

}  // namespace ebm::simd::detail
