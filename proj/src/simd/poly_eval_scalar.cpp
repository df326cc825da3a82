#include "ebm/simd/poly_eval.hpp"

#include <cstddef>

namespace ebm::simd::detail {

void eval_poly_scalar(const double* coeffs, int n_coeffs, const double* xs, double* out,
                      std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i)
    {
        const double x = xs[i];
        double acc = 0.0;
        for (int k = n_coeffs - 1; k >= 0; --k)
            acc = acc * x + coeffs[k];
        out[i] = acc;
    }
}

}  // namespace ebm::simd::detail
