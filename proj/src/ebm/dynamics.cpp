#include "ebm/dynamics.hpp"

#include "ebm/errors.hpp"
#include "ebm/legendre.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

namespace ebm {
namespace {

// Dormand-Prince 5(4) tableau.
constexpr int kStages = 7;
constexpr std::array<double, kStages> kC = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[kStages][kStages] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
constexpr std::array<double, kStages> kB = {35.0 / 384,     0.0, 500.0 / 1113, 125.0 / 192,
                                            -2187.0 / 6784, 11.0 / 84, 0.0};
constexpr std::array<double, kStages> kBhat = {5179.0 / 57600,     0.0,           7571.0 / 16695,
                                               393.0 / 640,        -92097.0 / 339200,
                                               187.0 / 2100,       1.0 / 40};

struct StepResult
{
    std::vector<double> x;
    double err = 0.0;
};

double error_norm(std::span<const double> x0, std::span<const double> x1,
                  std::span<const double> e, const IntegratorOpts& opts)
{
    double worst = 0.0;
    for (std::size_t i = 0; i < e.size(); ++i)
    {
        const double sc = opts.atol + opts.rtol * std::max(std::abs(x0[i]), std::abs(x1[i]));
        worst = std::max(worst, std::abs(e[i]) / sc);
    }
    return std::isfinite(worst) ? worst : std::numeric_limits<double>::infinity();
}

// Plain embedded RK over any field(x, dx, branch, pinned).
template<class Field>
StepResult dp_step(const Field& field, std::span<const double> x0, double h, Branch b, bool pinned,
                   const IntegratorOpts& opts)
{
    const std::size_t n = x0.size();
    std::array<std::vector<double>, kStages> k;
    std::vector<double> xs(n);
    for (int i = 0; i < kStages; ++i)
    {
        for (std::size_t m = 0; m < n; ++m)
        {
            double acc = 0.0;
            for (int j = 0; j < i; ++j)
                acc += kA[i][j] * k[j][m];
            xs[m] = x0[m] + h * acc;
        }
        k[i].resize(n);
        field(xs, k[i], b, pinned);
    }
    StepResult r;
    r.x.resize(n);
    std::vector<double> e(n);
    for (std::size_t m = 0; m < n; ++m)
    {
        double hi = 0.0, lo = 0.0;
        for (int j = 0; j < kStages; ++j)
        {
            hi += kB[j] * k[j][m];
            lo += kBhat[j] * k[j][m];
        }
        r.x[m] = x0[m] + h * hi;
        e[m] = h * (hi - lo);
    }
    r.err = error_norm(x0, r.x, e, opts);
    return r;
}

class FullSystem
{
  public:
    FullSystem(const Model& m, const IntegratorOpts& opts, bool exponential)
        : m_(m), opts_(opts), exponential_(exponential)
    {
        if (exponential_)
            for (Branch b : {Branch::Below, Branch::Above})
                for (int n = 0; n <= m.params().N; ++n)
                    dforcing_[b == Branch::Below ? 0 : 1].push_back(m.forcing(n, b).derivative());
    }

    std::size_t eta_index() const { return m_.layout().eta(); }
    std::optional<double> rho() const { return m_.rho(); }

    void field(std::span<const double> x, std::span<double> dx, Branch b, bool pinned) const
    {
        m_.rhs(x, dx, b);
        if (pinned)
            dx[eta_index()] = 0.0;
    }

    double eta_dot(std::span<const double> x, Branch b) const
    {
        return m_.params().eps * (m_.iceline_temperature(x, b) - m_.params().Tc);
    }

    StepResult step(std::span<const double> x0, double h, Branch b, bool pinned) const
    {
        if (!exponential_)
            return dp_step([this](std::span<const double> x, std::span<double> dx, Branch br, bool p) {
                field(x, dx, br, p);
            }, x0, h,
                           b, pinned, opts_);
        return exp_step(x0, h, b, pinned);
    }

  private:
    // Works on y_n = T_n - f_n(eta): y' = -lambda_n y - f_n'(eta) eta'.
    StepResult exp_step(std::span<const double> x0, double h, Branch b, bool pinned) const
    {
        const auto& pr = m_.params();
        const int N = pr.N;
        const std::size_t nm = static_cast<std::size_t>(N) + 1;
        const std::size_t ie = eta_index();
        const auto& df = dforcing_[b == Branch::Below ? 0 : 1];

        const double eta0 = x0[ie];
        std::vector<double> y0(nm), lambda(nm);
        for (int n = 0; n <= N; ++n)
        {
            y0[n] = x0[n] - m_.forcing(n, b)(eta0);
            lambda[n] = m_.decay_rate(n);
        }

        std::array<double, kStages> keta{};
        std::array<std::vector<double>, kStages> g;
        for (int i = 0; i < kStages; ++i)
        {
            double eta = eta0;
            for (int j = 0; j < i; ++j)
                eta += h * kA[i][j] * keta[j];
            double t_ice = 0.0;
            g[i].resize(nm);
            std::vector<double> fi(nm);
            for (int n = 0; n <= N; ++n)
            {
                double y = std::exp(-lambda[n] * kC[i] * h) * y0[n];
                for (int j = 0; j < i; ++j)
                    y += h * kA[i][j] * std::exp(-lambda[n] * (kC[i] - kC[j]) * h) * g[j][n];
                t_ice += (y + m_.forcing(n, b)(eta)) * legendre_poly(EvenMode(n))(eta);
                fi[n] = df[n](eta);
            }
            keta[i] = pinned ? 0.0 : pr.eps * (t_ice - pr.Tc);
            for (std::size_t n = 0; n < nm; ++n)
                g[i][n] = -fi[n] * keta[i];
        }

        double eta1 = eta0, eta_err = 0.0;
        for (int j = 0; j < kStages; ++j)
        {
            eta1 += h * kB[j] * keta[j];
            eta_err += h * (kB[j] - kBhat[j]) * keta[j];
        }
        StepResult r;
        r.x.resize(x0.size());
        std::vector<double> e(x0.size(), 0.0);
        for (int n = 0; n <= N; ++n)
        {
            double y = std::exp(-lambda[n] * h) * y0[n];
            double ey = 0.0;
            for (int j = 0; j < kStages; ++j)
            {
                const double decay = std::exp(-lambda[n] * (1.0 - kC[j]) * h);
                y += h * kB[j] * decay * g[j][n];
                ey += h * (kB[j] - kBhat[j]) * decay * g[j][n];
            }
            r.x[n] = y + m_.forcing(n, b)(eta1);
            e[n] = ey;
        }
        r.x[ie] = eta1;
        e[ie] = eta_err;
        r.err = error_norm(x0, r.x, e, opts_);
        return r;
    }

    const Model& m_;
    const IntegratorOpts& opts_;
    bool exponential_;
    std::array<std::vector<Polynomial>, 2> dforcing_;
};

class ReducedSystem
{
  public:
    ReducedSystem(const ReducedPoly& h, double eps, const IntegratorOpts& opts)
        : h_(h), eps_(eps), opts_(opts)
    {
    }

    std::size_t eta_index() const { return 0; }
    std::optional<double> rho() const { return h_.rho; }

    void field(std::span<const double> x, std::span<double> dx, Branch b, bool pinned) const
    {
        dx[0] = pinned ? 0.0 : eta_dot(x, b);
    }

    double eta_dot(std::span<const double> x, Branch b) const { return eps_ * h_.branch(b)(x[0]); }

    StepResult step(std::span<const double> x0, double h, Branch b, bool pinned) const
    {
        return dp_step([this](std::span<const double> x, std::span<double> dx, Branch br, bool p) {
                field(x, dx, br, p);
            }, x0, h, b,
                       pinned, opts_);
    }

  private:
    const ReducedPoly& h_;
    double eps_;
    const IntegratorOpts& opts_;
};

struct Raw
{
    std::vector<double> t;
    std::vector<std::vector<double>> x;
    std::vector<EventKind> marks;
    std::vector<Event> events;
    std::size_t steps = 0;
    std::size_t rejected = 0;
};

enum class Pin
{
    None,
    Rho,
    Zero,
    One,
};

template<class Sys>
Raw run(const Sys& sys, std::vector<double> x, const IntegratorOpts& opts)
{
    opts.validate();
    const std::size_t ie = sys.eta_index();
    const auto rho = sys.rho();
    Raw out;
    double t = 0.0;

    const auto record = [&](EventKind k) {
        out.t.push_back(t);
        out.x.push_back(x);
        out.marks.push_back(k);
        if (k != EventKind::None)
            out.events.push_back(Event{t, k, x[ie], out.t.size() - 1});
    };
    const auto mark_last = [&](EventKind k) {
        out.marks.back() = k;
        out.events.push_back(Event{t, k, x[ie], out.t.size() - 1});
    };

    Branch cur = (rho && x[ie] < *rho) ? Branch::Below : Branch::Above;
    Pin pin = Pin::None;

    // Side selection on Sigma from the one-sided eta velocities.
    const auto arrive_sigma = [&](Branch from) -> EventKind {
        const double vm = sys.eta_dot(x, Branch::Below);
        const double vp = sys.eta_dot(x, Branch::Above);
        if (vm > 0.0 && vp < 0.0)
        {
            pin = Pin::Rho;
            cur = Branch::Above;
            return EventKind::SlidingOnset;
        }
        if (vm >= 0.0 && vp >= 0.0)
            cur = Branch::Above;
        else if (vm <= 0.0 && vp <= 0.0)
            cur = Branch::Below;
        return cur != from ? EventKind::CrossSigma : EventKind::None;
    };
    const auto arrive_boundary = [&](double edge) -> EventKind {
        const double v = sys.eta_dot(x, cur);
        if (edge == 0.0 && v <= 0.0)
        {
            pin = Pin::Zero;
            return EventKind::BoundarySnowball;
        }
        if (edge == 1.0 && v >= 0.0)
        {
            pin = Pin::One;
            return EventKind::BoundaryIceFree;
        }
        return EventKind::None;
    };

    EventKind first = EventKind::None;
    if (rho && x[ie] == *rho)
        first = arrive_sigma(cur);
    else if (x[ie] <= 0.0 || x[ie] >= 1.0)
    {
        x[ie] = std::clamp(x[ie], 0.0, 1.0);
        first = arrive_boundary(x[ie]);
    }
    record(first);

    std::vector<double> f0(x.size());
    const auto rhs_norm = [&] {
        sys.field(x, f0, cur, pin != Pin::None);
        double m = 0.0;
        for (double v : f0)
            m = std::max(m, std::abs(v));
        return m;
    };

    if (opts.tol_eq > 0.0 && rhs_norm() < opts.tol_eq)
    {
        mark_last(EventKind::Equilibrium);
        return out;
    }

    double h;
    {
        sys.field(x, f0, cur, pin != Pin::None);
        double d0 = 0.0, d1 = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
        {
            const double sc = opts.atol + opts.rtol * std::abs(x[i]);
            d0 = std::max(d0, std::abs(x[i]) / sc);
            d1 = std::max(d1, std::abs(f0[i]) / sc);
        }
        h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        h = std::min({h, opts.max_step, opts.t_end});
    }

    while (t < opts.t_end)
    {
        if (out.steps + out.rejected >= opts.max_steps)
            throw StepFailure("integrate: step budget exhausted at t=" + std::to_string(t)
                              + ", eta=" + std::to_string(x[ie]));
        const bool last = h >= opts.t_end - t;
        if (last)
            h = opts.t_end - t;
        h = std::min(h, opts.max_step);

        StepResult r = sys.step(x, h, cur, pin != Pin::None);
        if (!(r.err <= 1.0))
        {
            ++out.rejected;
            h *= std::isfinite(r.err) ? std::max(0.2, 0.9 * std::pow(r.err, -0.2)) : 0.2;
            if (h < opts.min_step * std::max(1.0, std::abs(t)))
                throw StepFailure("integrate: step size underflow at t=" + std::to_string(t)
                                  + ", eta=" + std::to_string(x[ie]));
            continue;
        }

        std::optional<double> target;
        if (pin == Pin::None)
        {
            const double eta1 = r.x[ie];
            if (rho && cur == Branch::Below && eta1 >= *rho)
                target = *rho;
            else if (rho && cur == Branch::Above && eta1 < *rho)
                target = *rho;
            else if (eta1 < 0.0)
                target = 0.0;
            else if (eta1 > 1.0)
                target = 1.0;
        }

        ++out.steps;
        const double err = r.err;
        if (target)
        {
            // bisect the step length until eta lands on the target
            const double side0 = x[ie] - *target;
            double lo = 0.0, hi = h, hit = h;
            StepResult best = r;
            for (int it = 0; it < 200; ++it)
            {
                const double mid = 0.5 * (lo + hi);
                StepResult rm = sys.step(x, mid, cur, false);
                const double d = rm.x[ie] - *target;
                if (std::abs(d) <= opts.event_tol || hi - lo <= 1e-15 * std::max(1.0, t))
                {
                    best = std::move(rm);
                    hit = mid;
                    break;
                }
                if ((d < 0.0) == (side0 < 0.0) && d != 0.0)
                    lo = mid;
                else
                {
                    hi = mid;
                    best = std::move(rm);
                    hit = mid;
                }
            }
            x = std::move(best.x);
            x[ie] = *target;
            t += hit;
            const EventKind k = (rho && *target == *rho) ? arrive_sigma(cur) : arrive_boundary(*target);
            record(k);
        }
        else
        {
            x = std::move(r.x);
            t = last ? opts.t_end : t + h;
            record(EventKind::None);

            if (pin == Pin::Rho)
            {
                const double vm = sys.eta_dot(x, Branch::Below);
                const double vp = sys.eta_dot(x, Branch::Above);
                if (!(vm > 0.0 && vp < 0.0))
                {
                    pin = Pin::None;
                    cur = (vm <= 0.0 && vp <= 0.0) ? Branch::Below : Branch::Above;
                    mark_last(EventKind::SlidingExit);
                }
            }
            else if (pin == Pin::Zero || pin == Pin::One)
            {
                const double v = sys.eta_dot(x, cur);
                if ((pin == Pin::Zero && v > 0.0) || (pin == Pin::One && v < 0.0))
                {
                    pin = Pin::None;
                    mark_last(EventKind::BoundaryRelease);
                }
            }
        }

        if (opts.tol_eq > 0.0 && rhs_norm() < opts.tol_eq)
        {
            mark_last(EventKind::Equilibrium);
            break;
        }
        h *= err == 0.0 ? 5.0 : std::min(5.0, std::max(0.2, 0.9 * std::pow(err, -0.2)));
    }
    return out;
}

bool wants_exponential(const Model& m, Method method)
{
    const bool diffusive = m.variant() == Variant::DiffusiveBudyko
                           || m.variant() == Variant::DiffusiveJormungand;
    if (method == Method::ExponentialDormandPrince && !diffusive)
        throw std::invalid_argument("integrate: exponential stepping needs a diffusive variant");
    return method == Method::ExponentialDormandPrince || (method == Method::Auto && diffusive);
}

bool has_kind(const std::vector<Event>& events, EventKind k)
{
    return std::any_of(events.begin(), events.end(), [k](const Event& e) { return e.kind == k; });
}

}  // namespace

void IntegratorOpts::validate() const
{
    if (!(atol > 0.0 && rtol > 0.0 && event_tol > 0.0 && min_step > 0.0 && max_step > 0.0))
        throw std::invalid_argument("IntegratorOpts: tolerances and step bounds must be positive");
    if (!(t_end >= 0.0) || !std::isfinite(t_end))
        throw std::invalid_argument("IntegratorOpts: t_end must be finite and non-negative");
    if (!(tol_eq >= 0.0))
        throw std::invalid_argument("IntegratorOpts: tol_eq must be non-negative");
}

std::string_view to_string(EventKind k)
{
    switch (k)
    {
        case EventKind::None: return "";
        case EventKind::CrossSigma: return "cross-sigma";
        case EventKind::SlidingOnset: return "sliding-onset";
        case EventKind::SlidingExit: return "sliding-exit";
        case EventKind::BoundarySnowball: return "snowball";
        case EventKind::BoundaryIceFree: return "ice-free";
        case EventKind::BoundaryRelease: return "boundary-release";
        case EventKind::Equilibrium: return "equilibrium";
    }
    return "";
}

bool Trajectory::has(EventKind k) const
{
    return has_kind(events, k);
}

bool ReducedTrajectory::has(EventKind k) const
{
    return has_kind(events, k);
}

Trajectory integrate(const Model& model, const ModelState& state0, const IntegratorOpts& opts)
{
    if (state0.values.size() != model.layout().size())
        throw std::invalid_argument("integrate: state size does not match the model layout");
    if (!(state0.eta() >= 0.0 && state0.eta() <= 1.0))
        throw std::invalid_argument("integrate: eta outside [0, 1]");

    FullSystem sys(model, opts, wants_exponential(model, opts.method));
    Raw raw = run(sys, state0.values, opts);

    Trajectory tr;
    tr.t = std::move(raw.t);
    tr.states.reserve(raw.x.size());
    for (auto& v : raw.x)
        tr.states.push_back(ModelState{std::move(v)});
    tr.marks = std::move(raw.marks);
    tr.events = std::move(raw.events);
    tr.steps = raw.steps;
    tr.rejected = raw.rejected;
    return tr;
}

ReducedTrajectory integrate_reduced(const ReducedPoly& h, double eps, double eta0,
                                    const IntegratorOpts& opts)
{
    if (!(eta0 >= 0.0 && eta0 <= 1.0))
        throw std::invalid_argument("integrate_reduced: eta0 outside [0, 1]");
    if (!(eps >= 0.0))
        throw std::invalid_argument("integrate_reduced: eps must be non-negative");
    ReducedSystem sys(h, eps, opts);
    Raw raw = run(sys, std::vector<double>{eta0}, opts);

    ReducedTrajectory tr;
    tr.t = std::move(raw.t);
    tr.eta.reserve(raw.x.size());
    for (const auto& v : raw.x)
        tr.eta.push_back(v[0]);
    tr.marks = std::move(raw.marks);
    tr.events = std::move(raw.events);
    return tr;
}

FenichelReport fenichel_check(const ModelParams& params, double eta_star,
                              const std::vector<double>& eps_list, double tau, double offset,
                              double kick, const IntegratorOpts& opts)
{
    FenichelReport rep;
    if (!(tau > 0.0))
    {
        const double slope = build_h(Model(params)).slope(eta_star);
        if (slope == 0.0)
            throw std::invalid_argument("fenichel_check: h'(eta_star) vanishes; pass tau");
        tau = 1.0 / std::abs(slope);
    }
    rep.tau = tau;
    for (double eps : eps_list)
    {
        if (!(eps > 0.0))
            throw std::invalid_argument("fenichel_check: eps values must be positive");
        ModelParams p = params;
        p.eps = eps;
        const Model m(p);
        if (m.variant() != Variant::DiffusiveBudyko && m.variant() != Variant::DiffusiveJormungand)
            throw std::invalid_argument("fenichel_check: needs a diffusive variant");

        const double eta0 = std::clamp(eta_star - offset, 0.0, 1.0);
        ModelState x0 = m.slow_manifold_state(eta0);
        for (int n = 0; n <= p.N; ++n)
            x0.values[m.layout().T(n)] += kick;

        IntegratorOpts o = opts;
        o.t_end = tau / eps;
        o.tol_eq = 0.0;
        const Trajectory tr = integrate(m, x0, o);
        const auto& xe = tr.back().values;
        const double eta = xe.back();
        double dev = 0.0;
        for (int n = 0; n <= p.N; ++n)
            dev = std::max(dev, std::abs(xe[m.layout().T(n)] - m.forcing(n, m.branch_at(eta))(eta)));
        rep.rows.push_back(FenichelRow{eps, eta, dev});
    }
    for (std::size_t i = 0; i + 1 < rep.rows.size(); ++i)
        rep.ratios.push_back(rep.rows[i].deviation / rep.rows[i + 1].deviation);
    if (rep.rows.size() >= 2)
    {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double n = static_cast<double>(rep.rows.size());
        for (const auto& r : rep.rows)
        {
            const double lx = std::log(r.eps), ly = std::log(r.deviation);
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
        }
        rep.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    }
    return rep;
}

}  // namespace ebm
