#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

namespace ebm::simd {

enum class Isa
{
    Scalar,
    Avx2,
    Neon,
};

std::string_view to_string(Isa isa);

//! Compiled in and supported by the running CPU.
bool isa_available(Isa isa);

/*!
 * Kernel used by the dispatching entry points. Defaults to the widest
 * available ISA; EBM_SIMD=scalar|avx2|neon in the environment overrides it.
 */
Isa active_isa();

//! Test hook: force a kernel (nullopt restores the default choice).
void set_isa_override(std::optional<Isa> isa);

/*!
 * out[i] = sum_k coeffs[k] * xs[i]^k by Horner's rule.
 *
 * Every variant performs the same multiply-then-add sequence per lane
 * without fused multiply-add, so results are bitwise identical across ISAs.
 */
void eval_poly(std::span<const double> coeffs, std::span<const double> xs, std::span<double> out);
void eval_poly(Isa isa, std::span<const double> coeffs, std::span<const double> xs,
               std::span<double> out);

namespace detail {
void eval_poly_scalar(const double* coeffs, int n_coeffs, const double* xs, double* out,
                      std::size_t n);
void eval_poly_avx2(const double* coeffs, int n_coeffs, const double* xs, double* out,
                    std::size_t n);
void eval_poly_neon(const double* coeffs, int n_coeffs, const double* xs, double* out,
                    std::size_t n);
}  // namespace detail

}  // namespace ebm::simd
