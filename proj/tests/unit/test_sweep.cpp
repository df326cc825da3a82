#include "ebm/errors.hpp"
#include "ebm/sweep.hpp"

#include <doctest.h>

#include <cmath>
#include <map>

using namespace ebm;

namespace {

SweepSpec fig5()
{
    SweepSpec s;
    s.base = ModelParams::jormungand();
    s.base.N = 5;
    return s;
}

const SweepResult& fig5_result()
{
    static const SweepResult r = run_sweep(fig5());
    return r;
}

}  // namespace

TEST_SUITE("sweep")
{
TEST_CASE("spec validation and parameter names")
{
    SweepSpec s = fig5();
    CHECK_NOTHROW(s.validate());
    s.count = 1;
    CHECK_THROWS_AS(s.validate(), ConfigError);
    s = fig5();
    s.min = 200.0;
    s.max = 140.0;
    CHECK_THROWS_AS(s.validate(), ConfigError);
    CHECK(sweep_param_from_string("D") == SweepParam::D);
    CHECK_THROWS_AS(sweep_param_from_string("Z"), ConfigError);
    ModelParams p;
    set_param(p, SweepParam::C, 2.5);
    CHECK(p.C == 2.5);
    const auto g = fig5().grid();
    CHECK(g.size() == 601);
    CHECK(g.front() == 140.0);
    CHECK(g.back() == 200.0);
}

TEST_CASE("transitions of the A sweep")
{
    const auto& r = fig5_result();
    std::vector<double> folds;
    for (const auto& t : r.transitions)
        if (t.kind == EndKind::Fold)
            folds.push_back(t.param);
    REQUIRE(folds.size() == 4);
    CHECK(std::abs(folds[0] - 150.0) <= 2.0);
    CHECK(std::abs(folds[1] - 157.0) <= 2.0);
    CHECK(std::abs(folds[2] - 161.5) <= 1.5);
    CHECK(std::abs(folds[3] - 187.0) <= 2.0);
    for (const auto& t : r.transitions)
    {
        CHECK(t.hi - t.lo <= fig5().fold_tol + 1e-12);
        CHECK(t.lo <= t.param);
        CHECK(t.param <= t.hi);
    }
}

TEST_CASE("bistability window")
{
    const auto& r = fig5_result();
    const auto w = bistability_window(r);
    REQUIRE(w.size() == 1);
    CHECK(std::abs(w[0].first - 157.0) <= 1.5);
    CHECK(std::abs(w[0].second - 161.5) <= 1.5);
    auto near_fold = [&](double a) {
        for (const auto& t : r.transitions)
            if (t.kind == EndKind::Fold && std::abs(t.param - a) <= fig5().fold_tol)
                return true;
        return false;
    };
    CHECK(near_fold(w[0].first));
    CHECK(near_fold(w[0].second));
}

TEST_CASE("branch invariants")
{
    const auto& r = fig5_result();
    REQUIRE(!r.branches.empty());
    for (const auto& b : r.branches)
    {
        CAPTURE(b.id);
        for (std::size_t i = 0; i < b.points.size(); ++i)
        {
            CHECK(b.points[i].stability == b.stability);
            if (i > 0)
            {
                CHECK(b.points[i].param > b.points[i - 1].param);
                CHECK(std::abs(b.points[i].eta - b.points[i - 1].eta) <= fig5().match_radius);
            }
        }
        if (b.start != EndKind::DomainEdge)
            CHECK(b.start_param < b.points.front().param);
        if (b.end != EndKind::DomainEdge)
            CHECK(b.end_param > b.points.back().param);
    }
    // every interior root belongs to a branch
    for (std::size_t i = 0; i < r.grid.size(); ++i)
        for (std::size_t k = 0; k < r.equilibria[i].size(); ++k)
        {
            const auto st = r.equilibria[i][k].stability;
            if (st == Stability::Stable || st == Stability::Unstable)
                CHECK(r.branch_of[i][k] >= 0);
        }
}

TEST_CASE("fold pairs collide")
{
    for (const auto& t : fig5_result().transitions)
        if (t.kind == EndKind::Fold)
        {
            CAPTURE(t.param);
            CHECK(t.gap <= 0.02);
        }
}

TEST_CASE("the Jormungand ice line retreats south as A grows")
{
    const auto& r = fig5_result();
    bool found = false;
    for (const auto& b : r.branches)
    {
        if (b.stability != Stability::Stable || b.points.front().eta > 0.35)
            continue;
        found = true;
        for (std::size_t i = 1; i < b.points.size(); ++i)
            CHECK(b.points[i].eta < b.points[i - 1].eta);
    }
    CHECK(found);
}

TEST_CASE("result does not depend on the thread count")
{
    auto s = fig5();
    s.count = 121;
    s.threads = 1;
    const auto a = run_sweep(s);
    s.threads = 7;
    const auto b = run_sweep(s);
    REQUIRE(a.transitions.size() == b.transitions.size());
    for (std::size_t i = 0; i < a.transitions.size(); ++i)
        CHECK(a.transitions[i].param == b.transitions[i].param);
    REQUIRE(a.equilibria.size() == b.equilibria.size());
    for (std::size_t i = 0; i < a.equilibria.size(); ++i)
    {
        REQUIRE(a.equilibria[i].size() == b.equilibria[i].size());
        for (std::size_t k = 0; k < a.equilibria[i].size(); ++k)
            CHECK(a.equilibria[i][k].eta == b.equilibria[i][k].eta);
    }
    CHECK(a.branch_of == b.branch_of);
}

TEST_CASE("flat sweep has no folds")
{
    SweepSpec s;
    s.base = ModelParams::budyko();
    s.param = SweepParam::A;
    s.min = 201.0;
    s.max = 203.0;
    s.count = 2;
    const auto r = run_sweep(s);
    CHECK(r.transitions.empty());
    CHECK(r.branches.size() == 2);
    for (const auto& b : r.branches)
    {
        CHECK(b.start == EndKind::DomainEdge);
        CHECK(b.end == EndKind::DomainEdge);
    }
    CHECK(bistability_window(r).empty());
}

TEST_CASE("small ice cap appears as D grows")
{
    SweepSpec s;
    s.base = ModelParams::budyko();
    s.param = SweepParam::D;
    s.min = 0.35;
    s.max = 0.45;
    s.count = 101;
    const auto r = run_sweep(s);
    std::map<double, std::size_t> count;
    for (std::size_t i = 0; i < r.grid.size(); ++i)
    {
        std::size_t n = 0;
        for (const auto& e : r.equilibria[i])
            n += e.stability == Stability::Stable || e.stability == Stability::Unstable;
        count[r.grid[i]] = n;
    }
    CHECK(count.begin()->second == 2);
    bool three = false;
    for (const auto& [d, n] : count)
        three = three || n == 3;
    CHECK(three);
    const bool has_unstable_cap = std::any_of(r.branches.begin(), r.branches.end(), [](const auto& b) {
        return b.stability == Stability::Unstable && b.points.front().eta > 0.9;
    });
    CHECK(has_unstable_cap);
}
}
