#include "ebm/legendre.hpp"

#include <array>
#include <cstdint>
#include <numeric>
#include <vector>

namespace ebm {
namespace {

// Exact rational arithmetic for the recurrence; 128-bit intermediates keep
// degree <= 24 exact before the final conversion to double.
struct Rational
{
    std::int64_t num = 0;
    std::int64_t den = 1;

    static Rational make(__int128 n, __int128 d)
    {
        if (d < 0)
        {
            n = -n;
            d = -d;
        }
        __int128 a = n < 0 ? -n : n;
        __int128 b = d;
        while (b != 0)
        {
            const __int128 t = a % b;
            a = b;
            b = t;
        }
        if (a == 0)
            return {0, 1};
        return {static_cast<std::int64_t>(n / a), static_cast<std::int64_t>(d / a)};
    }

    Rational operator+(Rational o) const
    {
        return make(static_cast<__int128>(num) * o.den + static_cast<__int128>(o.num) * den,
                    static_cast<__int128>(den) * o.den);
    }
    Rational operator*(Rational o) const
    {
        return make(static_cast<__int128>(num) * o.num, static_cast<__int128>(den) * o.den);
    }
    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
};

using RationalPoly = std::vector<Rational>;

// (k+1) P_{k+1} = (2k+1) y P_k - k P_{k-1}
std::vector<RationalPoly> all_legendre(int max_degree)
{
    std::vector<RationalPoly> out;
    out.push_back({Rational{1, 1}});
    out.push_back({Rational{0, 1}, Rational{1, 1}});
    for (int k = 1; k < max_degree; ++k)
    {
        RationalPoly next(static_cast<std::size_t>(k) + 2, Rational{});
        const Rational a = Rational::make(2 * k + 1, k + 1);
        const Rational b = Rational::make(-k, k + 1);
        for (std::size_t i = 0; i < out[k].size(); ++i)
            next[i + 1] = next[i + 1] + a * out[k][i];
        for (std::size_t i = 0; i < out[k - 1].size(); ++i)
            next[i] = next[i] + b * out[k - 1][i];
        out.push_back(std::move(next));
    }
    return out;
}

struct Tables
{
    std::array<Polynomial, kMaxEvenMode + 1> p;
    std::array<Polynomial, kMaxEvenMode + 1> anti;
};

const Tables& tables()
{
    static const Tables t = [] {
        Tables result;
        const auto polys = all_legendre(2 * kMaxEvenMode);
        for (int n = 0; n <= kMaxEvenMode; ++n)
        {
            const RationalPoly& rp = polys[static_cast<std::size_t>(2 * n)];
            std::vector<double> c(rp.size());
            std::vector<double> a(rp.size() + 1, 0.0);
            for (std::size_t i = 0; i < rp.size(); ++i)
            {
                c[i] = rp[i].to_double();
                a[i + 1] = (rp[i] * Rational::make(1, static_cast<__int128>(i) + 1)).to_double();
            }
            result.p[static_cast<std::size_t>(n)] = Polynomial(std::move(c));
            result.anti[static_cast<std::size_t>(n)] = Polynomial(std::move(a));
        }
        return result;
    }();
    return t;
}

}  // namespace

const Polynomial& legendre_poly(EvenMode mode)
{
    return tables().p[static_cast<std::size_t>(mode.index())];
}

const Polynomial& legendre_antideriv(EvenMode mode)
{
    return tables().anti[static_cast<std::size_t>(mode.index())];
}

}  // namespace ebm
