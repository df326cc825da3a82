#include "ebm/simd/poly_eval.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace ebm::simd {
namespace {

std::atomic<int> g_override{-1};

Isa widest_available()
{
    if (isa_available(Isa::Avx2))
        return Isa::Avx2;
    if (isa_available(Isa::Neon))
        return Isa::Neon;
    return Isa::Scalar;
}

Isa default_isa()
{
    static const Isa chosen = [] {
        if (const char* env = std::getenv("EBM_SIMD"))
        {
            const std::string v(env);
            for (Isa isa : {Isa::Scalar, Isa::Avx2, Isa::Neon})
                if (v == to_string(isa) && isa_available(isa))
                    return isa;
        }
        return widest_available();
    }();
    return chosen;
}

}  // namespace

std::string_view to_string(Isa isa)
{
    switch (isa)
    {
        case Isa::Scalar: return "scalar";
        case Isa::Avx2: return "avx2";
        case Isa::Neon: return "neon";
    }
    return "scalar";
}

bool isa_available(Isa isa)
{
    switch (isa)
    {
        case Isa::Scalar: return true;
        case Isa::Avx2:
#if defined(EBM_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
            return __builtin_cpu_supports("avx2");
#else
            return false;
#endif
        case Isa::Neon:
#if defined(__aarch64__)
            return true;
#else
            return false;
#endif
    }
    return false;
}

Isa active_isa()
{
    const int o = g_override.load(std::memory_order_relaxed);
    return o >= 0 ? static_cast<Isa>(o) : default_isa();
}

void set_isa_override(std::optional<Isa> isa)
{
    if (isa && !isa_available(*isa))
        throw std::invalid_argument("simd: requested ISA is not available");
    g_override.store(isa ? static_cast<int>(*isa) : -1, std::memory_order_relaxed);
}

void eval_poly(std::span<const double> coeffs, std::span<const double> xs, std::span<double> out)
{
    eval_poly(active_isa(), coeffs, xs, out);
}

void eval_poly(Isa isa, std::span<const double> coeffs, std::span<const double> xs,
               std::span<double> out)
{
    if (out.size() < xs.size())
        throw std::invalid_argument("eval_poly: output shorter than input");
    if (!isa_available(isa))
        throw std::invalid_argument("eval_poly: ISA not available");
    const int nc = static_cast<int>(coeffs.size());
    switch (isa)
    {
        case Isa::Avx2: detail::eval_poly_avx2(coeffs.data(), nc, xs.data(), out.data(), xs.size()); return;
        case Isa::Neon: detail::eval_poly_neon(coeffs.data(), nc, xs.data(), out.data(), xs.size()); return;
        case Isa::Scalar: break;
    }
    detail::eval_poly_scalar(coeffs.data(), nc, xs.data(), out.data(), xs.size());
}

}  // namespace ebm::simd
