#include "ebm/sweep.hpp"

#include "ebm/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

namespace ebm {
namespace {

bool is_interior(const Equilibrium& e)
{
    return e.stability != Stability::BoundarySnowball && e.stability != Stability::BoundaryIceFree;
}

std::vector<Equilibrium> interior(const std::vector<Equilibrium>& eqs)
{
    std::vector<Equilibrium> out;
    std::copy_if(eqs.begin(), eqs.end(), std::back_inserter(out), is_interior);
    return out;
}

std::vector<Stability> signature(const std::vector<Equilibrium>& eqs)
{
    std::vector<Stability> s;
    for (const auto& e : eqs)
        if (is_interior(e))
            s.push_back(e.stability);
    return s;
}

std::vector<Equilibrium> evaluate(const SweepSpec& spec, double value)
{
    ModelParams p = spec.base;
    set_param(p, spec.param, value);
    return find_equilibria(Model(p), spec.roots);
}

// Greedy nearest matching with equal stability; returns the unmatched of each side.
std::pair<std::vector<Equilibrium>, std::vector<Equilibrium>>
unmatched(const std::vector<Equilibrium>& a, const std::vector<Equilibrium>& b, double radius)
{
    std::vector<bool> used_a(a.size()), used_b(b.size());
    struct Cand
    {
        double d;
        std::size_t i, j;
    };
    std::vector<Cand> cands;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            if (a[i].stability == b[j].stability && std::abs(a[i].eta - b[j].eta) <= radius)
                cands.push_back({std::abs(a[i].eta - b[j].eta), i, j});
    std::sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) {
        return x.d < y.d || (x.d == y.d && (x.i < y.i || (x.i == y.i && x.j < y.j)));
    });
    for (const auto& c : cands)
        if (!used_a[c.i] && !used_b[c.j])
            used_a[c.i] = used_b[c.j] = true;
    std::pair<std::vector<Equilibrium>, std::vector<Equilibrium>> out;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!used_a[i])
            out.first.push_back(a[i]);
    for (std::size_t j = 0; j < b.size(); ++j)
        if (!used_b[j])
            out.second.push_back(b[j]);
    return out;
}

bool opposite(Stability a, Stability b)
{
    return (a == Stability::Stable && b == Stability::Unstable)
           || (a == Stability::Unstable && b == Stability::Stable);
}

void classify_side(std::vector<Equilibrium> side, double lo, double hi, double radius,
                   std::vector<TransitionPoint>& out)
{
    std::sort(side.begin(), side.end(),
              [](const Equilibrium& x, const Equilibrium& y) { return x.eta < y.eta; });
    const double at = 0.5 * (lo + hi);
    std::vector<bool> done(side.size());
    // appearing or vanishing pairs of opposite stability
    for (std::size_t i = 0; i + 1 < side.size(); ++i)
    {
        if (done[i] || done[i + 1])
            continue;
        if (opposite(side[i].stability, side[i + 1].stability)
            && side[i + 1].eta - side[i].eta <= 2.0 * radius)
        {
            out.push_back({at, lo, hi, EndKind::Fold, 0.5 * (side[i].eta + side[i + 1].eta),
                           side[i + 1].eta - side[i].eta});
            done[i] = done[i + 1] = true;
        }
    }
    for (std::size_t i = 0; i < side.size(); ++i)
    {
        if (done[i])
            continue;
        const double eta = side[i].eta;
        const bool edge = eta <= radius || eta >= 1.0 - radius;
        out.push_back({at, lo, hi, edge ? EndKind::BoundaryCollision : EndKind::Transition, eta, 0.0});
    }
}

template<class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn)
{
    unsigned workers = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
    if (workers <= 1)
    {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++)
            {
                try
                {
                    fn(i);
                }
                catch (...)
                {
                    std::lock_guard lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                }
            }
        });
    for (auto& t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

const TransitionPoint* nearest_transition(const std::vector<TransitionPoint>& ts, double lo,
                                          double hi, double eta)
{
    const TransitionPoint* best = nullptr;
    for (const auto& t : ts)
        if (t.lo >= lo && t.hi <= hi
            && (!best || std::abs(t.eta - eta) < std::abs(best->eta - eta)))
            best = &t;
    return best;
}

}  // namespace

std::string_view to_string(SweepParam p)
{
    switch (p)
    {
        case SweepParam::A: return "A";
        case SweepParam::D: return "D";
        case SweepParam::C: return "C";
        case SweepParam::Q: return "Q";
    }
    return "A";
}

SweepParam sweep_param_from_string(std::string_view s)
{
    for (SweepParam p : {SweepParam::A, SweepParam::D, SweepParam::C, SweepParam::Q})
        if (s == to_string(p))
            return p;
    throw ConfigError("sweep: unknown parameter '" + std::string(s) + "' (expected A, D, C or Q)");
}

void set_param(ModelParams& params, SweepParam which, double value)
{
    switch (which)
    {
        case SweepParam::A: params.A = value; break;
        case SweepParam::D: params.D = value; break;
        case SweepParam::C: params.C = value; break;
        case SweepParam::Q: params.Q = value; break;
    }
}

std::string_view to_string(EndKind k)
{
    switch (k)
    {
        case EndKind::DomainEdge: return "domain-edge";
        case EndKind::Fold: return "fold";
        case EndKind::BoundaryCollision: return "boundary-collision";
        case EndKind::Transition: return "transition";
    }
    return "transition";
}

void SweepSpec::validate() const
{
    if (!(min < max))
        throw ConfigError("sweep: need min < max");
    if (count < 2)
        throw ConfigError("sweep: need at least 2 grid points");
    if (!(fold_tol > 0.0 && match_radius > 0.0 && fold_gap_tol > 0.0))
        throw ConfigError("sweep: tolerances must be positive");
    for (double v : {min, max})
    {
        ModelParams p = base;
        set_param(p, param, v);
        p.validate();
    }
}

std::vector<double> SweepSpec::grid() const
{
    std::vector<double> g(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        g[static_cast<std::size_t>(i)] = min + (max - min) * i / (count - 1);
    g.back() = max;
    return g;
}

SweepResult run_sweep(const SweepSpec& spec)
{
    spec.validate();
    SweepResult res;
    res.param = spec.param;
    res.grid = spec.grid();
    const std::size_t n = res.grid.size();
    res.equilibria.resize(n);
    parallel_for(n, spec.threads, [&](std::size_t i) { res.equilibria[i] = evaluate(spec, res.grid[i]); });

    // refine every pattern change between neighbouring grid values
    std::vector<std::size_t> changes;
    for (std::size_t i = 0; i + 1 < n; ++i)
        if (signature(res.equilibria[i]) != signature(res.equilibria[i + 1]))
            changes.push_back(i);
    std::vector<std::vector<TransitionPoint>> found(changes.size());
    parallel_for(changes.size(), spec.threads, [&](std::size_t k) {
        const std::size_t i = changes[k];
        double lo = res.grid[i], hi = res.grid[i + 1];
        auto e_lo = interior(res.equilibria[i]);
        auto e_hi = interior(res.equilibria[i + 1]);
        const auto s_lo = signature(e_lo);
        auto bisect = [&] {
            const double mid = 0.5 * (lo + hi);
            auto e = interior(evaluate(spec, mid));
            if (signature(e) == s_lo)
            {
                lo = mid;
                e_lo = std::move(e);
            }
            else
            {
                hi = mid;
                e_hi = std::move(e);
            }
        };
        while (hi - lo > spec.fold_tol)
            bisect();
        auto classify = [&] {
            found[k].clear();
            auto [only_lo, only_hi] = unmatched(e_lo, e_hi, spec.match_radius);
            classify_side(std::move(only_lo), lo, hi, spec.match_radius, found[k]);
            classify_side(std::move(only_hi), lo, hi, spec.match_radius, found[k]);
        };
        auto wide_fold = [&] {
            return std::any_of(found[k].begin(), found[k].end(), [&](const TransitionPoint& t) {
                return t.kind == EndKind::Fold && t.gap > spec.fold_gap_tol;
            });
        };
        classify();
        // the pair separates like sqrt(distance to the fold), so a few more halvings suffice
        for (int extra = 0; extra < 60 && wide_fold() && hi - lo > 1e-12 * (1.0 + std::abs(hi)); ++extra)
        {
            bisect();
            classify();
        }
        if (found[k].empty())
            found[k].push_back({0.5 * (lo + hi), lo, hi, EndKind::Transition, 0.0, 0.0});
    });
    for (auto& f : found)
        res.transitions.insert(res.transitions.end(), f.begin(), f.end());

    // branch assembly by nearest-neighbour continuation in eta
    res.branch_of.resize(n);
    std::vector<int> open;  // branch ids continued from the previous grid value
    for (std::size_t i = 0; i < n; ++i)
    {
        const auto& eqs = res.equilibria[i];
        res.branch_of[i].assign(eqs.size(), -1);
        struct Cand
        {
            double d;
            std::size_t e;
            int b;
        };
        std::vector<Cand> cands;
        for (std::size_t e = 0; e < eqs.size(); ++e)
        {
            if (!is_interior(eqs[e]))
                continue;
            for (int b : open)
            {
                const auto& last = res.branches[static_cast<std::size_t>(b)].points.back();
                const double d = std::abs(last.eta - eqs[e].eta);
                if (last.stability == eqs[e].stability && d <= spec.match_radius)
                    cands.push_back({d, e, b});
            }
        }
        std::sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) {
            return x.d < y.d || (x.d == y.d && (x.e < y.e || (x.e == y.e && x.b < y.b)));
        });
        std::vector<int> next_open;
        std::vector<bool> b_used(res.branches.size());
        for (const auto& c : cands)
        {
            if (res.branch_of[i][c.e] != -1 || b_used[static_cast<std::size_t>(c.b)])
                continue;
            res.branch_of[i][c.e] = c.b;
            b_used[static_cast<std::size_t>(c.b)] = true;
        }
        for (int b : open)
        {
            auto& br = res.branches[static_cast<std::size_t>(b)];
            if (b_used[static_cast<std::size_t>(b)])
                continue;
            const auto* t = nearest_transition(res.transitions, res.grid[i - 1], res.grid[i],
                                               br.points.back().eta);
            br.end = t ? t->kind : EndKind::Transition;
            br.end_param = t ? t->param : 0.5 * (res.grid[i - 1] + res.grid[i]);
        }
        for (std::size_t e = 0; e < eqs.size(); ++e)
        {
            if (!is_interior(eqs[e]))
                continue;
            int b = res.branch_of[i][e];
            if (b == -1)
            {
                BifurcationBranch br;
                br.id = static_cast<int>(res.branches.size());
                br.stability = eqs[e].stability;
                if (i == 0)
                {
                    br.start = EndKind::DomainEdge;
                    br.start_param = res.grid[0];
                }
                else
                {
                    const auto* t = nearest_transition(res.transitions, res.grid[i - 1],
                                                       res.grid[i], eqs[e].eta);
                    br.start = t ? t->kind : EndKind::Transition;
                    br.start_param = t ? t->param : 0.5 * (res.grid[i - 1] + res.grid[i]);
                }
                b = br.id;
                res.branches.push_back(std::move(br));
                res.branch_of[i][e] = b;
            }
            res.branches[static_cast<std::size_t>(b)].points.push_back(
                {res.grid[i], eqs[e].eta, eqs[e].stability, eqs[e].global_mean});
            next_open.push_back(b);
        }
        open = std::move(next_open);
    }
    for (int b : open)
    {
        auto& br = res.branches[static_cast<std::size_t>(b)];
        br.end = EndKind::DomainEdge;
        br.end_param = res.grid.back();
    }
    return res;
}

std::vector<std::pair<double, double>> bistability_window(const SweepResult& result)
{
    const auto& g = result.grid;
    std::vector<int> stable(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        for (const auto& e : result.equilibria[i])
            stable[i] += e.interior_stable() ? 1 : 0;

    const auto edge = [&](std::size_t i) {
        // refined change between grid i and i+1, if one was located
        double best = std::numeric_limits<double>::quiet_NaN();
        for (const auto& t : result.transitions)
            if (t.lo >= g[i] && t.hi <= g[i + 1])
                best = t.param;
        return std::isnan(best) ? 0.5 * (g[i] + g[i + 1]) : best;
    };

    std::vector<std::pair<double, double>> out;
    std::size_t i = 0;
    while (i < g.size())
    {
        if (stable[i] < 2)
        {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < g.size() && stable[j + 1] >= 2)
            ++j;
        const double lo = i == 0 ? g.front() : edge(i - 1);
        const double hi = j + 1 == g.size() ? g.back() : edge(j);
        out.emplace_back(lo, hi);
        i = j + 1;
    }
    return out;
}

}  // namespace ebm
