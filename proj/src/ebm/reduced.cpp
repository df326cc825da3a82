#include "ebm/reduced.hpp"

#include "ebm/errors.hpp"
#include "ebm/legendre.hpp"
#include "ebm/simd/poly_eval.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace ebm {
namespace {

const Polynomial& p(int n)
{
    return legendre_poly(EvenMode(n));
}

const Polynomial& P(int n)
{
    return legendre_antideriv(EvenMode(n));
}

bool is_diffusive(Variant v)
{
    return v == Variant::DiffusiveBudyko || v == Variant::DiffusiveJormungand;
}

Polynomial diffusive_h(const Model& m, Branch b)
{
    Polynomial h = Polynomial::constant(-m.params().Tc);
    for (int n = 0; n <= m.params().N; ++n)
        h += m.forcing(n, b) * p(n);
    return h;
}

Polynomial relax_budyko_h(const Model& m)
{
    const auto& pr = m.params();
    const auto& lay = m.layout();
    const auto& alb = std::get<BudykoAlbedo>(pr.albedo);
    const auto st = m.slow_manifold_state(0.5);
    const auto& x = st.values;
    const double a0 = 0.5 * (alb.alpha1 + alb.alpha2);

    Polynomial offset = x[lay.v()] * Polynomial{-0.5, 1.0};
    Polynomial mean_part;
    for (int n = 1; n <= pr.N; ++n)
    {
        offset += (x[lay.T(n)] - x[lay.V(n)]) * P(n);
        mean_part += (0.5 * (x[lay.T(n)] + x[lay.V(n)])) * p(n);
    }
    Polynomial u = (1.0 / pr.B)
                   * (Polynomial::constant(pr.Q * pr.s[0] * (1.0 - a0) - pr.A) + pr.C * offset);
    return u + mean_part - Polynomial::constant(pr.Tc);
}

Polynomial relax_jormungand_h(const Model& m, Branch b)
{
    const auto& pr = m.params();
    const auto& lay = m.layout();
    const auto& alb = std::get<JormungandAlbedo>(pr.albedo);
    const auto st = m.slow_manifold_state(0.5, b);
    const auto& x = st.values;
    const double rho = alb.rho;
    const double a0 = 0.5 * (alb.alpha1 + alb.alpha2);
    const double gamma1 = 0.5 * (a0 + alb.alphai);
    const double z1 = x[lay.z1()];
    const double z2 = x[lay.z2()];

    Polynomial offset;
    Polynomial at_ice;
    if (b == Branch::Below)
    {
        offset = Polynomial{0.5 * z1 * (rho - 1.0) + z2 * (0.5 - rho), 0.5 * z1 + z2};
        at_ice = Polynomial::constant(0.25 * z1);
        for (int n = 1; n <= pr.N; ++n)
        {
            const double T = x[lay.T(n)], V = x[lay.V(n)], W = x[lay.W(n)];
            offset += (T - V) * P(n) + Polynomial::constant((V - W) * P(n)(rho));
            at_ice += (0.5 * (T + V)) * p(n);
        }
    }
    else
    {
        offset = Polynomial{0.5 * z2 - 0.5 * z1, z1};
        at_ice = Polynomial::constant(0.5 * z2);
        for (int n = 1; n <= pr.N; ++n)
        {
            const double T = x[lay.T(n)], W = x[lay.W(n)];
            offset += (T - W) * P(n);
            at_ice += (0.5 * (T + W)) * p(n);
        }
    }
    Polynomial w = (1.0 / pr.B)
                   * (Polynomial::constant(pr.Q * pr.s[0] * (1.0 - gamma1) - pr.A) + pr.C * offset);
    return w + at_ice - Polynomial::constant(pr.Tc);
}

struct Segment
{
    double a;
    double b;
    Branch branch;
};

double bisect(const Polynomial& h, double lo, double hi, double flo)
{
    for (int it = 0; it < 200 && hi - lo > 0.0; ++it)
    {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        const double fm = h(mid);
        if (fm == 0.0)
            return mid;
        if ((fm < 0.0) == (flo < 0.0))
        {
            lo = mid;
            flo = fm;
        }
        else
        {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Newton steps kept inside the bracket; stops once |h| <= tol or no progress.
double polish(const Polynomial& h, const Polynomial& dh, double x, double lo, double hi, double tol)
{
    double fx = h(x);
    for (int it = 0; it < 8 && std::abs(fx) > tol; ++it)
    {
        const double d = dh(x);
        if (d == 0.0)
            break;
        const double xn = x - fx / d;
        if (!(xn >= lo && xn <= hi))
            break;
        const double fn = h(xn);
        if (std::abs(fn) >= std::abs(fx))
            break;
        x = xn;
        fx = fn;
    }
    return x;
}

void scan_segment(const Polynomial& h, const Segment& seg, const RootOptions& opts,
                  std::vector<double>& roots)
{
    const int cells = std::max(1, static_cast<int>(std::lround(opts.grid * (seg.b - seg.a))));
    std::vector<double> xs(static_cast<std::size_t>(cells) + 1);
    for (int i = 0; i <= cells; ++i)
        xs[static_cast<std::size_t>(i)] = seg.a + (seg.b - seg.a) * i / cells;
    xs.back() = seg.b;
    std::vector<double> vals(xs.size());
    simd::eval_poly(h.coeffs(), xs, vals);

    const Polynomial dh = h.derivative();
    for (std::size_t i = 0; i < xs.size(); ++i)
    {
        if (vals[i] == 0.0)
        {
            roots.push_back(xs[i]);
            continue;
        }
        if (i + 1 < xs.size() && vals[i + 1] != 0.0 && (vals[i] < 0.0) != (vals[i + 1] < 0.0))
        {
            const double r = bisect(h, xs[i], xs[i + 1], vals[i]);
            roots.push_back(polish(h, dh, r, xs[i], xs[i + 1], opts.h_tol));
        }
    }
}

Stability classify(double slope, const RootOptions& opts)
{
    if (std::abs(slope) < opts.degenerate_slope)
        return Stability::Degenerate;
    return slope < 0.0 ? Stability::Stable : Stability::Unstable;
}

}  // namespace

std::string_view to_string(Stability s)
{
    switch (s)
    {
        case Stability::Stable: return "stable";
        case Stability::Unstable: return "unstable";
        case Stability::SlidingAtRho: return "sliding";
        case Stability::BoundarySnowball: return "snowball";
        case Stability::BoundaryIceFree: return "ice-free";
        case Stability::Degenerate: return "degenerate";
    }
    return "degenerate";
}

ReducedPoly build_h(const Model& model)
{
    ReducedPoly h;
    h.variant = model.variant();
    h.N = model.params().N;
    h.rho = model.rho();
    switch (h.variant)
    {
        case Variant::DiffusiveBudyko:
        case Variant::DiffusiveJormungand:
            h.below = diffusive_h(model, Branch::Below);
            h.above = diffusive_h(model, Branch::Above);
            break;
        case Variant::RelaxBudyko:
            h.above = relax_budyko_h(model);
            h.below = h.above;
            break;
        case Variant::RelaxJormungand:
            h.below = relax_jormungand_h(model, Branch::Below);
            h.above = relax_jormungand_h(model, Branch::Above);
            break;
    }
    return h;
}

ReducedPoly build_h(const ModelParams& params)
{
    return build_h(Model(params));
}

FilippovValue filippov_set(const ReducedPoly& h)
{
    if (!h.rho)
        throw std::invalid_argument("filippov_set: no switching latitude");
    FilippovValue f;
    f.h_minus = h.below(*h.rho);
    f.h_plus = h.above(*h.rho);
    f.lo = std::min(f.h_minus, f.h_plus);
    f.hi = std::max(f.h_minus, f.h_plus);
    f.sliding = f.h_minus > 0.0 && f.h_plus < 0.0;
    f.repelling = f.h_minus < 0.0 && f.h_plus > 0.0;
    return f;
}

std::vector<Equilibrium> find_equilibria(const ReducedPoly& h, const RootOptions& opts)
{
    std::vector<Segment> segments;
    if (h.rho)
        segments = {{0.0, *h.rho, Branch::Below}, {*h.rho, 1.0, Branch::Above}};
    else
        segments = {{0.0, 1.0, Branch::Above}};

    std::vector<Equilibrium> out;
    const auto seen = [&](double eta) {
        return std::any_of(out.begin(), out.end(),
                           [&](const Equilibrium& e) { return std::abs(e.eta - eta) < 1e-9; });
    };

    for (const auto& seg : segments)
    {
        const Polynomial& poly = h.branch(seg.branch);
        std::vector<double> roots;
        scan_segment(poly, seg, opts, roots);
        for (double r : roots)
        {
            // the segment's closed end at rho belongs to the upper branch
            if (seg.branch == Branch::Below && r >= *h.rho && h.discontinuous())
                continue;
            if (seen(r))
                continue;
            Equilibrium e;
            e.eta = r;
            e.slope = poly.derivative()(r);
            e.stability = classify(e.slope, opts);
            out.push_back(std::move(e));
        }
    }

    if (h.discontinuous())
    {
        const FilippovValue f = filippov_set(h);
        if ((f.sliding || f.repelling) && !seen(*h.rho))
        {
            Equilibrium e;
            e.eta = *h.rho;
            e.stability = f.sliding ? Stability::SlidingAtRho : Stability::Unstable;
            out.push_back(std::move(e));
        }
    }

    if (opts.boundaries)
    {
        if (h.below(0.0) < 0.0)
            out.push_back(Equilibrium{0.0, Stability::BoundarySnowball, 0.0, {}, 0.0});
        if (h.above(1.0) > 0.0)
            out.push_back(Equilibrium{1.0, Stability::BoundaryIceFree, 0.0, {}, 0.0});
    }

    std::sort(out.begin(), out.end(),
              [](const Equilibrium& a, const Equilibrium& b) { return a.eta < b.eta; });
    return out;
}

std::vector<Equilibrium> find_equilibria(const Model& model, const RootOptions& opts)
{
    auto eqs = find_equilibria(build_h(model), opts);
    for (auto& e : eqs)
    {
        const Branch b = e.stability == Stability::SlidingAtRho ? Branch::Above : model.branch_at(e.eta);
        auto st = model.slow_manifold_state(e.eta, b);
        e.global_mean = model.global_mean(st.values, b);
        st.values.pop_back();
        e.temp_coeffs = std::move(st.values);
    }
    return eqs;
}

std::vector<double> slow_manifold_temps(const Model& model, double eta)
{
    if (!is_diffusive(model.variant()))
        throw std::invalid_argument("slow_manifold_temps: needs a diffusive variant");
    std::vector<double> out;
    const Branch b = model.branch_at(eta);
    for (int n = 0; n <= model.params().N; ++n)
        out.push_back(model.forcing(n, b)(eta));
    return out;
}

std::vector<double> slow_manifold_temps(const ModelParams& params, double eta)
{
    return slow_manifold_temps(Model(params), eta);
}

double solve_D_for_target(const ModelParams& params, double eta_target)
{
    if (params.variant() != Variant::DiffusiveBudyko)
        throw std::invalid_argument("solve_D_for_target: needs the diffusive Budyko variant");
    if (!(eta_target >= 0.0 && eta_target <= 1.0))
        throw std::invalid_argument("solve_D_for_target: target outside [0, 1]");

    const auto g = [&](double D) {
        ModelParams p = params;
        p.D = D;
        return build_h(Model(p))(eta_target);
    };
    constexpr double lo = 1e-3;
    constexpr double hi = 10.0;
    const double glo = g(lo);
    const double ghi = g(hi);
    if (std::abs(ghi - glo) <= 1e-12 * std::max(1.0, std::abs(glo)))
        throw DegenerateRoot("solve_D_for_target: h(eta_target) does not depend on D");
    if (glo == 0.0)
        return lo;
    if (ghi == 0.0)
        return hi;
    if ((glo < 0.0) == (ghi < 0.0))
        throw NoSolution("solve_D_for_target: no sign change for D in (1e-3, 10)");

    std::uintmax_t max_iter = 200;
    const auto [a, b] = boost::math::tools::toms748_solve(
        g, lo, hi, glo, ghi, boost::math::tools::eps_tolerance<double>(50), max_iter);
    return 0.5 * (a + b);
}

}  // namespace ebm
