#include "oracle.hpp"

#include "ebm/dynamics.hpp"
#include "ebm/insolation.hpp"
#include "ebm/legendre.hpp"
#include "ebm/reduced.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/legendre.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace ebm::oracle {

double integrate(const std::function<double(double)>& f, double a, double b,
                 std::vector<double> breaks, double tol)
{
    std::vector<double> pts{a};
    std::sort(breaks.begin(), breaks.end());
    for (double x : breaks)
        if (x > a && x < b)
            pts.push_back(x);
    pts.push_back(b);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, pts[i], pts[i + 1],
                                                                               12, tol);
    return total;
}

double p2n(int n, double y)
{
    return boost::math::legendre_p(2 * n, y);
}

double dp2n(int n, double y)
{
    return boost::math::legendre_p_prime(2 * n, y);
}

double series(const std::vector<double>& c, double y)
{
    double acc = 0.0;
    for (std::size_t n = 0; n < c.size(); ++n)
        acc += c[n] * p2n(static_cast<int>(n), y);
    return acc;
}

double s_exact(double beta_deg, double y)
{
    const double b = beta_deg * std::numbers::pi / 180.0;
    const double cy = std::sqrt(1.0 - y * y);
    const auto f = [&](double g) {
        const double x = cy * std::sin(b) * std::cos(g) - y * std::cos(b);
        return std::sqrt(std::max(0.0, 1.0 - x * x));
    };
    // symmetric in g about pi; the radicand touches zero where x = +-1
    std::vector<double> breaks{0.5 * std::numbers::pi};
    for (double sign : {-1.0, 1.0})
    {
        const double c = (sign + y * std::cos(b)) / (cy * std::sin(b));
        if (std::isfinite(c) && std::abs(c) < 1.0)
            breaks.push_back(std::acos(c));
    }
    const double half = integrate(f, 0.0, std::numbers::pi, breaks, 1e-12);
    return 4.0 / (std::numbers::pi * std::numbers::pi) * half;
}

double s_coefficient(double beta_deg, int n)
{
    const double kink = std::cos(beta_deg * std::numbers::pi / 180.0);
    // the inner integral is good to ~1e-12, so asking more of the outer one only burns time
    return (4.0 * n + 1.0)
           * integrate([&](double y) { return s_exact(beta_deg, y) * p2n(n, y); }, 0.0, 1.0, {kink},
                       1e-10);
}

double albedo(const AlbedoSpec& spec, double y, double eta)
{
    if (const auto* b = std::get_if<BudykoAlbedo>(&spec))
        return y < eta ? b->alpha1 : b->alpha2;
    const auto& j = std::get<JormungandAlbedo>(spec);
    if (eta >= j.rho)
        return y < eta ? j.alpha1 : j.alpha2;
    if (y < eta)
        return j.alpha1;
    return y < j.rho ? j.alphai : j.alpha2;
}

namespace {

std::vector<double> breaks_for(const AlbedoSpec& spec, double eta)
{
    std::vector<double> br{eta};
    if (const auto* j = std::get_if<JormungandAlbedo>(&spec))
        br.push_back(j->rho);
    return br;
}

std::vector<double> coeffs_of(const ModelParams& p)
{
    std::vector<double> s(static_cast<std::size_t>(p.N) + 1);
    for (int n = 0; n <= p.N; ++n)
        s[static_cast<std::size_t>(n)] = p.s[n];
    return s;
}

}  // namespace

double albedo_moment(const AlbedoSpec& spec, const std::vector<double>& s, int n, double eta)
{
    const auto f = [&](double y) { return albedo(spec, y, eta) * series(s, y) * p2n(n, y); };
    return (4.0 * n + 1.0) * integrate(f, 0.0, 1.0, breaks_for(spec, eta));
}

double diffusive_h(const ModelParams& p, double eta)
{
    const auto s = coeffs_of(p);
    double h = -p.Tc;
    for (int n = 0; n <= p.N; ++n)
    {
        const double lambda = p.B + 2.0 * n * (2.0 * n + 1.0) * p.D;
        double f = p.Q * (s[static_cast<std::size_t>(n)] - albedo_moment(p.albedo, s, n, eta)) / lambda;
        if (n == 0)
            f -= p.A / p.B;
        h += f * p2n(n, eta);
    }
    return h;
}

double relax_h(const ModelParams& p, double eta)
{
    const auto s = coeffs_of(p);
    const double absorbed = integrate([&](double y) { return series(s, y) * (1.0 - albedo(p.albedo, y, eta)); },
                                      0.0, 1.0, breaks_for(p.albedo, eta));
    const double tbar = (p.Q * absorbed - p.A) / p.B;
    const auto T = [&](double alpha) {
        return (p.Q * series(s, eta) * (1.0 - alpha) - p.A + p.C * tbar) / (p.B + p.C);
    };
    const double d = 1e-9;
    const double lo = albedo(p.albedo, std::max(0.0, eta - d), eta);
    const double hi = albedo(p.albedo, std::min(1.0, eta + d), eta);
    return 0.5 * (T(lo) + T(hi)) - p.Tc;
}

double relax_profile_mean(const ModelParams& p, const std::vector<double>& x)
{
    const int N = p.N;
    const double eta = x.back();
    const auto piece = [&](double c0, std::size_t first, double y) {
        double acc = c0;
        for (int n = 1; n <= N; ++n)
            acc += x[first + static_cast<std::size_t>(n - 1)] * p2n(n, y);
        return acc;
    };
    const std::size_t NN = static_cast<std::size_t>(N);
    if (std::holds_alternative<BudykoAlbedo>(p.albedo))
    {
        const double u = x[0], v = x[1];
        const auto T = [&](double y) {
            return y < eta ? piece(u + 0.5 * v, 2, y) : piece(u - 0.5 * v, 2 + NN, y);
        };
        return integrate(T, 0.0, 1.0, {eta});
    }
    const double rho = std::get<JormungandAlbedo>(p.albedo).rho;
    const double w = x[0], z1 = x[1], z2 = x[2];
    const double u0 = w + 0.5 * z2 + 0.5 * z1;
    const double v0 = w - 0.5 * z2;
    const double w0 = w + 0.5 * z2 - 0.5 * z1;
    const auto T = [&](double y) {
        if (y < eta)
            return piece(u0, 3, y);
        if (eta < rho && y < rho)
            return piece(v0, 3 + NN, y);
        return piece(w0, 3 + 2 * NN, y);
    };
    return integrate(T, 0.0, 1.0, {eta, rho});
}

namespace {

Check make(std::string name, double err, double tol, std::string detail = {})
{
    return Check{std::move(name), err <= tol, err, tol, std::move(detail)};
}

ModelParams relax(ModelParams p)
{
    p.transport = Transport::RelaxToMean;
    return p;
}

}  // namespace

std::vector<Check> run_suite(unsigned seed)
{
    std::vector<Check> out;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    // (a) albedo moments, 20 cases per albedo kind
    {
        const std::vector<double> quad{1.0, -0.477};
        const SpectralSeries s5 = s_coefficients(23.5, 5);
        const std::vector<double> comp(s5.coeffs().begin(), s5.coeffs().end());
        double worst = 0.0;
        int cases = 0;
        for (int kind = 0; kind < 2; ++kind)
            for (int k = 0; k < 20; ++k, ++cases)
            {
                const AlbedoSpec spec = kind == 0 ? AlbedoSpec{BudykoAlbedo{}} : AlbedoSpec{JormungandAlbedo{}};
                const bool use_comp = k % 2 == 1;
                const auto& sc = use_comp ? comp : quad;
                const int n = static_cast<int>(unit(rng) * 6.0) % 6;
                const double eta = unit(rng);
                const AlbedoMoments m = albedo_moments(spec, SpectralSeries(sc), 5);
                worst = std::max(worst, std::abs(m.active(n, eta)(eta) - albedo_moment(spec, sc, n, eta)));
            }
        out.push_back(make("(a) albedo moments vs quadrature, " + std::to_string(cases) + " cases", worst, 1e-10));
    }

    // (b) Legendre identities
    {
        double orth = 0.0;
        for (int m = 0; m <= 6; ++m)
            for (int n = 0; n <= 6; ++n)
            {
                const auto& pm = legendre_poly(EvenMode(m));
                const auto& pn = legendre_poly(EvenMode(n));
                const double got = integrate([&](double y) { return pm(y) * pn(y); }, 0.0, 1.0);
                const double want = m == n ? 1.0 / (4.0 * n + 1.0) : 0.0;
                orth = std::max(orth, std::abs(got - want));
            }
        out.push_back(make("(b) orthogonality of p_2m p_2n on [0,1], m,n <= 6", orth, 1e-9));

        double eig = 0.0;
        for (int n = 0; n <= 6; ++n)
        {
            const auto& p = legendre_poly(EvenMode(n));
            const Polynomial lhs = (Polynomial{1.0, 0.0, -1.0} * p.derivative()).derivative();
            for (int k = 1; k <= 50; ++k)
            {
                const double y = k / 51.0;
                const double want = -diffusion_eigenvalue(EvenMode(n)) * p(y);
                eig = std::max(eig, std::abs(lhs(y) - want) / std::max(1.0, std::abs(want)));
            }
        }
        out.push_back(make("(b) eigenfunction identity, n <= 6, 50 points", eig, 1e-9));

        double agree = 0.0;
        for (int n = 0; n <= 10; ++n)
            for (int k = 0; k <= 40; ++k)
                agree = std::max(agree, std::abs(legendre_poly(EvenMode(n))(k / 40.0) - p2n(n, k / 40.0)));
        out.push_back(make("(b) monomial p_2n vs reference recurrence, n <= 10", agree, 1e-9));
    }

    // (c) Sigma continuity and the one-sided Jacobian gap
    {
        const Model m(ModelParams::jormungand());
        const double rho = *m.rho();
        double cont = 0.0;
        std::normal_distribution<double> temp(0.0, 20.0);
        for (int k = 0; k < 10; ++k)
        {
            std::vector<double> x(m.layout().size());
            for (auto& v : x)
                v = temp(rng);
            x.back() = rho;
            std::vector<double> dm(x.size()), dp(x.size());
            m.rhs(x, dm, Branch::Below);
            m.rhs(x, dp, Branch::Above);
            for (std::size_t i = 0; i < x.size(); ++i)
                cont = std::max(cont, std::abs(dm[i] - dp[i]));
        }
        out.push_back(make("(c) glued vector fields agree on Sigma, 10 states", cont, 1e-12));

        const auto& pr = m.params();
        const auto& j = std::get<JormungandAlbedo>(pr.albedo);
        const double closed = pr.Q / pr.B * (j.alpha2 - j.alphai) * series({1.0, -0.477}, rho);
        const double gap = m.jacobian_gap_at_sigma();
        out.push_back(make("(c) Jacobian gap vs (Q/B)(a2-ai)s(rho)", std::abs(gap - closed) / closed, 1e-12));

        const double hstep = 1e-6;
        const auto& fp = m.forcing(0, Branch::Above);
        const auto& fm = m.forcing(0, Branch::Below);
        const double fd = (fp(rho + hstep) - fp(rho)) / hstep - (fm(rho) - fm(rho - hstep)) / hstep;
        out.push_back(make("(c) Jacobian gap vs one-sided finite differences", std::abs(fd - closed) / closed, 1e-4));
    }

    // (d) full versus reduced ice line, mid-transient and terminal
    {
        struct Case
        {
            const char* name;
            ModelParams p;
            double eta0;
        };
        ModelParams jp = ModelParams::jormungand();
        const std::vector<Case> cases{{"diffusive Budyko", ModelParams::budyko(), 0.7},
                                      {"diffusive Jormungand", jp, 0.4}};
        for (const auto& c : cases)
            for (double eps : {1e-2, 1e-3})
            {
                ModelParams p = c.p;
                p.eps = eps;
                const Model m(p);
                const ReducedPoly h = build_h(m);
                IntegratorOpts probe;
                probe.t_end = 200.0 / eps;
                const double eta_end = integrate_reduced(h, eps, c.eta0, probe).eta.back();
                // one e-folding of the reduced flow toward the attractor
                const double tau = 1.0 / std::abs(h.slope(eta_end));
                double terminal_gap = 0.0, mid_gap = 0.0;
                for (int phase = 0; phase < 2; ++phase)
                {
                    IntegratorOpts o;
                    o.t_end = phase == 0 ? tau / eps : 200.0 / eps;
                    const Trajectory full = integrate(m, m.slow_manifold_state(c.eta0), o);
                    const ReducedTrajectory red = integrate_reduced(h, eps, c.eta0, o);
                    const double gap = std::abs(full.back().eta() - red.eta.back());
                    (phase == 0 ? mid_gap : terminal_gap) = gap;
                }
                std::ostringstream d;
                d << "slow time " << tau << ": " << mid_gap << ", terminal: " << terminal_gap;
                out.push_back(make(std::string("(d) full vs reduced eta, ") + c.name + ", eps=" + (eps > 5e-3 ? "1e-2" : "1e-3"),
                                   std::max(mid_gap, terminal_gap), 10.0 * eps, d.str()));
            }
    }

    // (e) relaxation mean temperature closed form vs profile quadrature
    {
        double worst = 0.0;
        std::normal_distribution<double> temp(0.0, 15.0);
        for (int variant = 0; variant < 2; ++variant)
            for (int N : {1, 3})
                for (int k = 0; k < 6; ++k)
                {
                    ModelParams p = relax(variant == 0 ? ModelParams::budyko() : ModelParams::jormungand());
                    p.N = N;
                    const Model m(p);
                    std::vector<double> x(m.layout().size());
                    for (auto& v : x)
                        v = temp(rng);
                    x.back() = unit(rng);
                    worst = std::max(worst, std::abs(m.global_mean(x) - relax_profile_mean(p, x)));
                }
        out.push_back(make("(e) relaxation mean temperature vs profile quadrature", worst, 1e-9));
    }

    // reduced functions against the steady-state oracles
    {
        double worst = 0.0;
        const std::vector<ModelParams> ps{ModelParams::budyko(), ModelParams::jormungand(),
                                          relax(ModelParams::budyko()), relax(ModelParams::jormungand())};
        for (const auto& p : ps)
        {
            const ReducedPoly h = build_h(p);
            const bool diffusive = p.transport == Transport::Diffusive;
            for (int k = 1; k < 20; ++k)
            {
                const double eta = k / 20.0 + 0.013;
                const double want = diffusive ? diffusive_h(p, eta) : relax_h(p, eta);
                worst = std::max(worst, std::abs(h(eta) - want));
            }
        }
        out.push_back(make("reduced h vs steady-state oracle, four variants", worst, 1e-9));
    }
    return out;
}

}  // namespace ebm::oracle
