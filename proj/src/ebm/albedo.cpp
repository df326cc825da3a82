#include "ebm/albedo.hpp"

#include "ebm/errors.hpp"
#include "ebm/legendre.hpp"

namespace ebm {
namespace {

template<class... Ts>
struct Overloaded : Ts...
{
    using Ts::operator()...;
};

// int_0^eta q_{2n}(y) dy with q_{2n} = s p_{2n}
Polynomial q_integral(const Polynomial& s_poly, int n)
{
    return (s_poly * legendre_poly(EvenMode(n))).antiderivative();
}

double step(double y, double edge, double below, double above)
{
    if (y < edge)
        return below;
    if (y > edge)
        return above;
    return 0.5 * (below + above);
}

}  // namespace

void validate(const AlbedoSpec& spec)
{
    std::visit(Overloaded{
                   [](const BudykoAlbedo& b) {
                       if (!(0.0 < b.alpha1 && b.alpha1 < b.alpha2 && b.alpha2 < 1.0))
                           throw ConfigError("albedo: Budyko needs 0 < alpha1 < alpha2 < 1");
                   },
                   [](const JormungandAlbedo& j) {
                       if (!(0.0 < j.alpha1 && j.alpha1 < j.alphai && j.alphai < j.alpha2
                             && j.alpha2 < 1.0))
                           throw ConfigError(
                               "albedo: Jormungand needs 0 < alpha1 < alphai < alpha2 < 1");
                       if (!(0.0 < j.rho && j.rho < 1.0))
                           throw ConfigError("albedo: Jormungand needs 0 < rho < 1");
                   },
               },
               spec);
}

std::optional<double> switching_latitude(const AlbedoSpec& spec)
{
    if (const auto* j = std::get_if<JormungandAlbedo>(&spec))
        return j->rho;
    return std::nullopt;
}

double pointwise_albedo(const AlbedoSpec& spec, double y, double eta)
{
    return std::visit(Overloaded{
                          [&](const BudykoAlbedo& b) { return step(y, eta, b.alpha1, b.alpha2); },
                          [&](const JormungandAlbedo& j) {
                              if (eta >= j.rho)
                                  return step(y, eta, j.alpha1, j.alpha2);
                              if (y <= eta)
                                  return step(y, eta, j.alpha1, j.alphai);
                              return step(y, j.rho, j.alphai, j.alpha2);
                          },
                      },
                      spec);
}

AlbedoMoments budyko_moments(const BudykoAlbedo& spec, const SpectralSeries& s, int max_mode)
{
    const Polynomial s_poly = s.as_polynomial();
    AlbedoMoments m;
    for (int n = 0; n <= max_mode; ++n)
    {
        const double w = 4.0 * n + 1.0;
        Polynomial moment = Polynomial::constant(spec.alpha2 * s[n])
                            - (w * (spec.alpha2 - spec.alpha1)) * q_integral(s_poly, n);
        m.above.push_back(moment);
        m.below.push_back(std::move(moment));
    }
    return m;
}

AlbedoMoments jormungand_moments(const JormungandAlbedo& spec, const SpectralSeries& s,
                                 int max_mode)
{
    const Polynomial s_poly = s.as_polynomial();
    AlbedoMoments m;
    m.rho = spec.rho;
    for (int n = 0; n <= max_mode; ++n)
    {
        const double w = 4.0 * n + 1.0;
        const Polynomial q_int = q_integral(s_poly, n);
        const Polynomial base = Polynomial::constant(spec.alpha2 * s[n]);

        m.above.push_back(base - (w * (spec.alpha2 - spec.alpha1)) * q_int);

        // int_eta^rho q = Q(rho) - Q(eta)
        const Polynomial eta_to_rho = Polynomial::constant(q_int(spec.rho)) - q_int;
        m.below.push_back(base
                          - w * ((spec.alpha2 - spec.alphai) * eta_to_rho
                                 + (spec.alpha2 - spec.alpha1) * q_int));
    }
    return m;
}

AlbedoMoments albedo_moments(const AlbedoSpec& spec, const SpectralSeries& s, int max_mode)
{
    return std::visit(Overloaded{
                          [&](const BudykoAlbedo& b) { return budyko_moments(b, s, max_mode); },
                          [&](const JormungandAlbedo& j) {
                              return jormungand_moments(j, s, max_mode);
                          },
                      },
                      spec);
}

}  // namespace ebm
