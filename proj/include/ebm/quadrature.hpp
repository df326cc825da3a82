#pragma once

#include "ebm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ebm {

struct QuadratureOptions
{
    double tol = 1e-10;                        //!< absolute error target
    std::size_t max_intervals = std::size_t{1} << 20;
};

/*!
 * Adaptive Simpson quadrature of f over [a, b].
 *
 * Intervals are refined depth-first with the local tolerance halved per
 * split, so the accepted error estimates sum to at most tol. Integrands with
 * jumps must be split at the jump (see the breakpoint overload); a jump
 * inside an interval never meets the halving criterion and exhausts the
 * budget.
 */
template<class F>
double quadrature(F&& f, double a, double b, QuadratureOptions opts = {})
{
    if (!(a <= b))
        throw std::invalid_argument("quadrature: requires a <= b");
    if (a == b)
        return 0.0;

    struct Segment
    {
        double a, b, fa, fm, fb, whole, tol;
    };

    const auto simpson = [](double a, double b, double fa, double fm, double fb) {
        return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    };

    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));

    std::vector<Segment> stack;
    stack.push_back({a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), opts.tol});

    double total = 0.0;
    std::size_t processed = 0;
    while (!stack.empty())
    {
        const Segment s = stack.back();
        stack.pop_back();
        if (++processed > opts.max_intervals)
            throw NonConvergence("quadrature: subdivision budget exhausted on ["
                                 + std::to_string(a) + ", " + std::to_string(b) + "]");

        const double m = 0.5 * (s.a + s.b);
        const double lm = 0.5 * (s.a + m);
        const double rm = 0.5 * (m + s.b);
        const double flm = f(lm);
        const double frm = f(rm);
        const double left = simpson(s.a, m, s.fa, flm, s.fm);
        const double right = simpson(m, s.b, s.fm, frm, s.fb);
        const double delta = left + right - s.whole;

        if (std::abs(delta) <= 15.0 * s.tol)
        {
            total += left + right + delta / 15.0;
            continue;
        }
        // right half pushed first so the left half is processed first
        stack.push_back({m, s.b, s.fm, frm, s.fb, right, 0.5 * s.tol});
        stack.push_back({s.a, m, s.fa, flm, s.fm, left, 0.5 * s.tol});
    }
    return total;
}

//! Splits [a, b] at the given interior points; tolerance is shared by length.
template<class F>
double quadrature(F&& f, double a, double b, std::span<const double> breakpoints,
                  QuadratureOptions opts = {})
{
    std::vector<double> cuts{a};
    for (double c : breakpoints)
        if (c > a && c < b)
            cuts.push_back(c);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());

    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    {
        QuadratureOptions piece = opts;
        piece.tol = opts.tol * (cuts[i + 1] - cuts[i]) / (b - a);
        total += quadrature(f, cuts[i], cuts[i + 1], piece);
    }
    return total;
}

}  // namespace ebm
