#include "ebm/simd/poly_eval.hpp"

#include <cstddef>

#if defined(__aarch64__)
#include <arm_neon.h>
#endif

namespace ebm::simd::detail {

#if defined(__aarch64__)

void eval_poly_neon(const double* coeffs, int n_coeffs, const double* xs, double* out,
                    std::size_t n)
{
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
    {
        const float64x2_t x = vld1q_f64(xs + i);
        float64x2_t acc = vdupq_n_f64(0.0);
        for (int k = n_coeffs - 1; k >= 0; --k)
            acc = vaddq_f64(vmulq_f64(acc, x), vdupq_n_f64(coeffs[k]));
        vst1q_f64(out + i, acc);
    }
    eval_poly_scalar(coeffs, n_coeffs, xs + i, out + i, n - i);
}

#else

void eval_poly_neon(const double* coeffs, int n_coeffs, const double* xs, double* out,
                    std::size_t n)
{
    eval_poly_scalar(coeffs, n_coeffs, xs, out, n);
}

#endif

}  // namespace ebm::simd::detail
