#include "ebm/model.hpp"

#include "ebm/errors.hpp"
#include "ebm/legendre.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ebm {
namespace {

double p(int n, double y)
{
    return legendre_poly(EvenMode(n))(y);
}

double P(int n, double y)
{
    return legendre_antideriv(EvenMode(n))(y);
}

std::size_t at(Branch b)
{
    return b == Branch::Below ? 0 : 1;
}

}  // namespace

std::string_view to_string(Variant v)
{
    switch (v)
    {
        case Variant::DiffusiveBudyko: return "diffusive-budyko";
        case Variant::DiffusiveJormungand: return "diffusive-jormungand";
        case Variant::RelaxBudyko: return "relax-budyko";
        case Variant::RelaxJormungand: return "relax-jormungand";
    }
    return "unknown";
}

Variant ModelParams::variant() const
{
    const bool jorm = std::holds_alternative<JormungandAlbedo>(albedo);
    if (transport == Transport::Diffusive)
        return jorm ? Variant::DiffusiveJormungand : Variant::DiffusiveBudyko;
    return jorm ? Variant::RelaxJormungand : Variant::RelaxBudyko;
}

void ModelParams::validate() const
{
    if (!(Q > 0.0 && B > 0.0 && R > 0.0))
        throw ConfigError("params: Q, B and R must be positive");
    if (!(eps >= 0.0))
        throw ConfigError("params: eps must be non-negative");
    if (N < 1 || N > kMaxEvenMode)
        throw ConfigError("params: N must lie in [1, " + std::to_string(kMaxEvenMode) + "]");
    if (transport == Transport::Diffusive && !(D > 0.0))
        throw ConfigError("params: diffusive transport needs D > 0");
    if (transport == Transport::RelaxToMean && !(C > 0.0))
        throw ConfigError("params: relaxation transport needs C > 0");
    if (s.max_mode() < 0 || !(s[0] > 0.0))
        throw ConfigError("params: insolation series needs s_0 > 0");
    for (double c : s.coeffs())
        if (!std::isfinite(c))
            throw ConfigError("params: insolation coefficients must be finite");
    ebm::validate(albedo);
}

ModelParams ModelParams::budyko()
{
    ModelParams p;
    p.Q = 343.0;
    p.A = 202.0;
    p.B = 1.9;
    p.Tc = -10.0;
    p.albedo = BudykoAlbedo{0.32, 0.62};
    return p;
}

ModelParams ModelParams::jormungand()
{
    ModelParams p;
    p.Q = 321.0;
    p.A = 167.0;
    p.B = 1.9;
    p.D = 0.25;
    p.Tc = 0.0;
    p.albedo = JormungandAlbedo{0.32, 0.36, 0.8, 0.35};
    return p;
}

StateLayout::StateLayout(Variant v, int N) : variant_(v), N_(N)
{
    switch (v)
    {
        case Variant::DiffusiveBudyko:
        case Variant::DiffusiveJormungand:
            first_mode_ = 0;
            size_ = static_cast<std::size_t>(N) + 2;
            break;
        case Variant::RelaxBudyko:
            first_mode_ = 1;
            size_ = 2 * static_cast<std::size_t>(N) + 3;
            break;
        case Variant::RelaxJormungand:
            first_mode_ = 2;
            size_ = 3 * static_cast<std::size_t>(N) + 4;
            break;
    }
}

std::size_t StateLayout::T(int n) const
{
    return first_mode_ + static_cast<std::size_t>(n);
}

std::size_t StateLayout::V(int n) const
{
    if (variant_ != Variant::RelaxBudyko && variant_ != Variant::RelaxJormungand)
        throw std::logic_error("StateLayout: V coefficients exist only for relaxation variants");
    return first_mode_ + static_cast<std::size_t>(N_ + n);
}

std::size_t StateLayout::W(int n) const
{
    if (variant_ != Variant::RelaxJormungand)
        throw std::logic_error("StateLayout: W coefficients exist only for relax Jormungand");
    return first_mode_ + static_cast<std::size_t>(2 * N_ + n);
}

std::vector<std::string> StateLayout::names() const
{
    std::vector<std::string> out;
    const auto modes = [&](const char* prefix, int from) {
        for (int n = from; n <= N_; ++n)
            out.push_back(prefix + std::to_string(2 * n));
    };
    switch (variant_)
    {
        case Variant::DiffusiveBudyko:
        case Variant::DiffusiveJormungand: modes("T", 0); break;
        case Variant::RelaxBudyko:
            out = {"u", "v"};
            modes("T", 1);
            modes("V", 1);
            break;
        case Variant::RelaxJormungand:
            out = {"w", "z1", "z2"};
            modes("T", 1);
            modes("V", 1);
            modes("W", 1);
            break;
    }
    out.emplace_back("eta");
    return out;
}

Model::Model(ModelParams params)
    : params_(std::move(params)),
      variant_(params_.variant()),
      layout_(variant_, params_.N),
      rho_(switching_latitude(params_.albedo))
{
    params_.validate();
    moments_ = albedo_moments(params_.albedo, params_.s, params_.N);

    const auto& pr = params_;
    for (int n = 0; n <= pr.N; ++n)
    {
        const double lambda = n == 0 ? pr.B : pr.B + diffusion_eigenvalue(EvenMode(n)) * pr.D;
        rates_.push_back(lambda / pr.R);
        for (Branch b : {Branch::Below, Branch::Above})
        {
            const auto& mom = b == Branch::Below ? moments_.below : moments_.above;
            Polynomial f = (pr.Q / lambda)
                           * (Polynomial::constant(pr.s[n]) - mom[static_cast<std::size_t>(n)]);
            if (n == 0)
                f -= Polynomial::constant(pr.A / pr.B);
            forcing_[at(b)].push_back(std::move(f));
        }
    }
}

Branch Model::branch_at(double eta) const
{
    return (rho_ && eta < *rho_) ? Branch::Below : Branch::Above;
}

const Polynomial& Model::forcing(int n, Branch b) const
{
    return forcing_[at(b)].at(static_cast<std::size_t>(n));
}

double Model::decay_rate(int n) const
{
    return rates_.at(static_cast<std::size_t>(n));
}

void Model::rhs(std::span<const double> x, std::span<double> dx) const
{
    rhs(x, dx, branch_at(x.back()));
}

void Model::rhs(std::span<const double> x, std::span<double> dx, Branch b) const
{
    switch (variant_)
    {
        case Variant::DiffusiveBudyko:
        case Variant::DiffusiveJormungand: rhs_diffusive(x, dx, b); break;
        case Variant::RelaxBudyko: rhs_relax_budyko(x, dx); break;
        case Variant::RelaxJormungand: rhs_relax_jormungand(x, dx, b); break;
    }
}

void Model::rhs_diffusive(std::span<const double> x, std::span<double> dx, Branch b) const
{
    const double eta = x[layout_.eta()];
    double t_ice = 0.0;
    for (int n = 0; n <= params_.N; ++n)
    {
        const double Tn = x[layout_.T(n)];
        dx[layout_.T(n)] = -decay_rate(n) * (Tn - forcing(n, b)(eta));
        t_ice += Tn * p(n, eta);
    }
    dx[layout_.eta()] = params_.eps * (t_ice - params_.Tc);
}

void Model::rhs_relax_budyko(std::span<const double> x, std::span<double> dx) const
{
    const auto& pr = params_;
    const auto& alb = std::get<BudykoAlbedo>(pr.albedo);
    const double K = pr.B + pr.C;
    const double a0 = 0.5 * (alb.alpha1 + alb.alpha2);
    const double tbar = global_mean(x, Branch::Above);

    dx[layout_.u()] = (pr.Q * pr.s[0] * (1.0 - a0) - K * x[layout_.u()] - pr.A + pr.C * tbar) / pr.R;
    dx[layout_.v()] = (pr.Q * pr.s[0] * (alb.alpha2 - alb.alpha1) - K * x[layout_.v()]) / pr.R;
    for (int n = 1; n <= pr.N; ++n)
    {
        dx[layout_.T(n)] = (pr.Q * pr.s[n] * (1.0 - alb.alpha1) - K * x[layout_.T(n)]) / pr.R;
        dx[layout_.V(n)] = (pr.Q * pr.s[n] * (1.0 - alb.alpha2) - K * x[layout_.V(n)]) / pr.R;
    }
    dx[layout_.eta()] = pr.eps * (iceline_temperature(x, Branch::Above) - pr.Tc);
}

void Model::rhs_relax_jormungand(std::span<const double> x, std::span<double> dx, Branch b) const
{
    const auto& pr = params_;
    const auto& alb = std::get<JormungandAlbedo>(pr.albedo);
    const double K = pr.B + pr.C;
    const double a0 = 0.5 * (alb.alpha1 + alb.alpha2);
    const double gamma1 = 0.5 * (a0 + alb.alphai);
    const double tbar = global_mean(x, b);

    dx[layout_.w()] = (pr.Q * pr.s[0] * (1.0 - gamma1) - pr.A - K * x[layout_.w()] + pr.C * tbar) / pr.R;
    dx[layout_.z1()] = (pr.Q * pr.s[0] * (alb.alpha2 - alb.alpha1) - K * x[layout_.z1()]) / pr.R;
    dx[layout_.z2()] = (pr.Q * pr.s[0] * (alb.alphai - a0) - K * x[layout_.z2()]) / pr.R;
    for (int n = 1; n <= pr.N; ++n)
    {
        dx[layout_.T(n)] = (pr.Q * pr.s[n] * (1.0 - alb.alpha1) - K * x[layout_.T(n)]) / pr.R;
        dx[layout_.V(n)] = (pr.Q * pr.s[n] * (1.0 - alb.alphai) - K * x[layout_.V(n)]) / pr.R;
        dx[layout_.W(n)] = (pr.Q * pr.s[n] * (1.0 - alb.alpha2) - K * x[layout_.W(n)]) / pr.R;
    }
    dx[layout_.eta()] = pr.eps * (iceline_temperature(x, b) - pr.Tc);
}

// T-bar minus the u (or w) variable; independent of that variable.
double Model::relax_tbar_offset(std::span<const double> x, Branch b) const
{
    const double eta = x[layout_.eta()];
    const int N = params_.N;
    double acc = 0.0;
    if (variant_ == Variant::RelaxBudyko)
    {
        acc = x[layout_.v()] * (eta - 0.5);
        for (int n = 1; n <= N; ++n)
            acc += (x[layout_.T(n)] - x[layout_.V(n)]) * P(n, eta);
        return acc;
    }
    const double rho = *rho_;
    const double z1 = x[layout_.z1()];
    const double z2 = x[layout_.z2()];
    if (b == Branch::Below)
    {
        acc = 0.5 * z1 * (eta + rho - 1.0) + z2 * (eta - rho + 0.5);
        for (int n = 1; n <= N; ++n)
            acc += (x[layout_.T(n)] - x[layout_.V(n)]) * P(n, eta)
                   + (x[layout_.V(n)] - x[layout_.W(n)]) * P(n, rho);
        return acc;
    }
    // no bare-ice band: U below eta, W above, with x = w + z2/2
    acc = 0.5 * z2 + z1 * (eta - 0.5);
    for (int n = 1; n <= N; ++n)
        acc += (x[layout_.T(n)] - x[layout_.W(n)]) * P(n, eta);
    return acc;
}

double Model::global_mean(std::span<const double> x) const
{
    return global_mean(x, branch_at(x.back()));
}

double Model::global_mean(std::span<const double> x, Branch b) const
{
    switch (variant_)
    {
        case Variant::DiffusiveBudyko:
        case Variant::DiffusiveJormungand: return x[layout_.T(0)];
        case Variant::RelaxBudyko: return x[layout_.u()] + relax_tbar_offset(x, Branch::Above);
        case Variant::RelaxJormungand: return x[layout_.w()] + relax_tbar_offset(x, b);
    }
    return 0.0;
}

double Model::iceline_temperature(std::span<const double> x) const
{
    return iceline_temperature(x, branch_at(x.back()));
}

double Model::iceline_temperature(std::span<const double> x, Branch b) const
{
    const double eta = x[layout_.eta()];
    const int N = params_.N;
    double acc = 0.0;
    switch (variant_)
    {
        case Variant::DiffusiveBudyko:
        case Variant::DiffusiveJormungand:
            for (int n = 0; n <= N; ++n)
                acc += x[layout_.T(n)] * p(n, eta);
            return acc;
        case Variant::RelaxBudyko:
            acc = x[layout_.u()];
            for (int n = 1; n <= N; ++n)
                acc += 0.5 * (x[layout_.T(n)] + x[layout_.V(n)]) * p(n, eta);
            return acc;
        case Variant::RelaxJormungand:
            if (b == Branch::Below)
            {
                acc = x[layout_.w()] + 0.25 * x[layout_.z1()];
                for (int n = 1; n <= N; ++n)
                    acc += 0.5 * (x[layout_.T(n)] + x[layout_.V(n)]) * p(n, eta);
                return acc;
            }
            acc = x[layout_.w()] + 0.5 * x[layout_.z2()];
            for (int n = 1; n <= N; ++n)
                acc += 0.5 * (x[layout_.T(n)] + x[layout_.W(n)]) * p(n, eta);
            return acc;
    }
    return acc;
}

double Model::temperature_profile(std::span<const double> x, double y) const
{
    const double eta = x[layout_.eta()];
    const int N = params_.N;
    const auto series = [&](double c0, auto coeff) {
        double acc = c0;
        for (int n = 1; n <= N; ++n)
            acc += coeff(n) * p(n, y);
        return acc;
    };
    switch (variant_)
    {
        case Variant::DiffusiveBudyko:
        case Variant::DiffusiveJormungand:
            return series(x[layout_.T(0)], [&](int n) { return x[layout_.T(n)]; });
        case Variant::RelaxBudyko:
        {
            const double u = x[layout_.u()];
            const double v = x[layout_.v()];
            const double U = series(u + 0.5 * v, [&](int n) { return x[layout_.T(n)]; });
            const double Vp = series(u - 0.5 * v, [&](int n) { return x[layout_.V(n)]; });
            if (y < eta)
                return U;
            if (y > eta)
                return Vp;
            return 0.5 * (U + Vp);
        }
        case Variant::RelaxJormungand:
        {
            const double w = x[layout_.w()];
            const double z1 = x[layout_.z1()];
            const double z2 = x[layout_.z2()];
            const double xm = w + 0.5 * z2;
            const double U = series(xm + 0.5 * z1, [&](int n) { return x[layout_.T(n)]; });
            const double Vb = series(w - 0.5 * z2, [&](int n) { return x[layout_.V(n)]; });
            const double Wp = series(xm - 0.5 * z1, [&](int n) { return x[layout_.W(n)]; });
            const double rho = *rho_;
            if (eta >= rho)
            {
                if (y < eta)
                    return U;
                if (y > eta)
                    return Wp;
                return 0.5 * (U + Wp);
            }
            if (y < eta)
                return U;
            if (y == eta)
                return 0.5 * (U + Vb);
            if (y < rho)
                return Vb;
            if (y == rho)
                return 0.5 * (Vb + Wp);
            return Wp;
        }
    }
    return 0.0;
}

std::vector<double> Model::profile_breakpoints(std::span<const double> x) const
{
    const double eta = x[layout_.eta()];
    switch (variant_)
    {
        case Variant::DiffusiveBudyko:
        case Variant::DiffusiveJormungand: return {};
        case Variant::RelaxBudyko: return {eta};
        case Variant::RelaxJormungand:
            if (eta < *rho_)
                return {eta, *rho_};
            return {eta};
    }
    return {};
}

ModelState Model::slow_manifold_state(double eta) const
{
    return slow_manifold_state(eta, branch_at(eta));
}

ModelState Model::slow_manifold_state(double eta, Branch b) const
{
    const auto& pr = params_;
    ModelState st{std::vector<double>(layout_.size(), 0.0)};
    st.eta() = eta;
    switch (variant_)
    {
        case Variant::DiffusiveBudyko:
        case Variant::DiffusiveJormungand:
            for (int n = 0; n <= pr.N; ++n)
                st.values[layout_.T(n)] = forcing(n, b)(eta);
            return st;
        case Variant::RelaxBudyko:
        {
            const auto& alb = std::get<BudykoAlbedo>(pr.albedo);
            const double L = pr.Q / (pr.B + pr.C);
            st.values[layout_.v()] = L * pr.s[0] * (alb.alpha2 - alb.alpha1);
            for (int n = 1; n <= pr.N; ++n)
            {
                st.values[layout_.T(n)] = L * pr.s[n] * (1.0 - alb.alpha1);
                st.values[layout_.V(n)] = L * pr.s[n] * (1.0 - alb.alpha2);
            }
            const double a0 = 0.5 * (alb.alpha1 + alb.alpha2);
            st.values[layout_.u()] =
                (pr.Q * pr.s[0] * (1.0 - a0) - pr.A + pr.C * relax_tbar_offset(st.values, b)) / pr.B;
            return st;
        }
        case Variant::RelaxJormungand:
        {
            const auto& alb = std::get<JormungandAlbedo>(pr.albedo);
            const double L = pr.Q / (pr.B + pr.C);
            const double a0 = 0.5 * (alb.alpha1 + alb.alpha2);
            const double gamma1 = 0.5 * (a0 + alb.alphai);
            st.values[layout_.z1()] = L * pr.s[0] * (alb.alpha2 - alb.alpha1);
            st.values[layout_.z2()] = L * pr.s[0] * (alb.alphai - a0);
            for (int n = 1; n <= pr.N; ++n)
            {
                st.values[layout_.T(n)] = L * pr.s[n] * (1.0 - alb.alpha1);
                st.values[layout_.V(n)] = L * pr.s[n] * (1.0 - alb.alphai);
                st.values[layout_.W(n)] = L * pr.s[n] * (1.0 - alb.alpha2);
            }
            st.values[layout_.w()] =
                (pr.Q * pr.s[0] * (1.0 - gamma1) - pr.A + pr.C * relax_tbar_offset(st.values, b))
                / pr.B;
            return st;
        }
    }
    return st;
}

double Model::jacobian_gap_at_sigma() const
{
    if (variant_ != Variant::DiffusiveJormungand)
        throw std::logic_error("jacobian_gap_at_sigma: needs the diffusive Jormungand variant");
    const double rho = *rho_;
    return forcing(0, Branch::Above).derivative()(rho) - forcing(0, Branch::Below).derivative()(rho);
}

std::vector<double> Model::diffusive_jacobian(std::span<const double> x, Branch b) const
{
    if (variant_ != Variant::DiffusiveBudyko && variant_ != Variant::DiffusiveJormungand)
        throw std::logic_error("diffusive_jacobian: needs a diffusive variant");
    const std::size_t n_dim = layout_.size();
    const double eta = x[layout_.eta()];
    std::vector<double> J(n_dim * n_dim, 0.0);
    double d_eta_d_eta = 0.0;
    for (int n = 0; n <= params_.N; ++n)
    {
        const std::size_t row = layout_.T(n);
        J[row * n_dim + row] = -decay_rate(n);
        J[row * n_dim + layout_.eta()] = decay_rate(n) * forcing(n, b).derivative()(eta);
        J[layout_.eta() * n_dim + row] = params_.eps * p(n, eta);
        d_eta_d_eta += x[row] * legendre_poly(EvenMode(n)).derivative()(eta);
    }
    J[layout_.eta() * n_dim + layout_.eta()] = params_.eps * d_eta_d_eta;
    return J;
}

}  // namespace ebm
