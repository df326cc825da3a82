#include "ebm/insolation.hpp"

#include "ebm/errors.hpp"
#include "ebm/legendre.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ebm {
namespace {

double radians(double deg)
{
    return deg * std::numbers::pi / 180.0;
}

}  // namespace

void InsolationSpec::validate() const
{
    if (!(beta_deg >= 0.0 && beta_deg < 90.0))
        throw ConfigError("insolation: obliquity must lie in [0, 90) degrees");
    if (mode == Mode::Truncated && !(truncated[0] > 0.0))
        throw ConfigError("insolation: truncated series needs s_0 > 0");
}

double polar_circle(double beta_deg)
{
    return std::cos(radians(beta_deg));
}

double s_exact(double beta_deg, double y, double tol)
{
    const double sb = std::sin(radians(beta_deg));
    const double cb = std::cos(radians(beta_deg));
    const double cy = std::sqrt(std::max(0.0, 1.0 - y * y));
    const auto integrand = [=](double g) {
        const double x = cy * sb * std::cos(g) - y * cb;
        return std::sqrt(std::max(0.0, 1.0 - x * x));
    };
    QuadratureOptions opts;
    opts.tol = tol;
    const double two_pi = 2.0 * std::numbers::pi;
    return 2.0 / (std::numbers::pi * std::numbers::pi) * quadrature(integrand, 0.0, two_pi, opts);
}

double s_exact(const InsolationSpec& spec, double y)
{
    if (spec.mode != InsolationSpec::Mode::ExactIntegral)
        throw std::invalid_argument("s_exact: spec is not in exact-integral mode");
    return s_exact(spec.beta_deg, y);
}

SpectralSeries s_coefficients(double beta_deg, int max_mode, double tol)
{
    if (max_mode < 0)
        throw std::invalid_argument("s_coefficients: max_mode must be >= 0");
    const std::array<double, 1> kink{polar_circle(beta_deg)};
    const double inner_tol = tol * 1e-2;

    std::vector<double> c(static_cast<std::size_t>(max_mode) + 1);
    for (int n = 0; n <= max_mode; ++n)
    {
        const Polynomial& p = legendre_poly(EvenMode(n));
        const auto integrand = [&](double y) { return s_exact(beta_deg, y, inner_tol) * p(y); };
        QuadratureOptions opts;
        opts.tol = tol / (4.0 * n + 1.0);
        c[static_cast<std::size_t>(n)] = (4.0 * n + 1.0) * quadrature(integrand, 0.0, 1.0, kink, opts);
    }
    return SpectralSeries(std::move(c));
}

SpectralSeries s_coefficients(const InsolationSpec& spec, int max_mode)
{
    if (spec.mode == InsolationSpec::Mode::Truncated)
        return spec.truncated;
    return s_coefficients(spec.beta_deg, max_mode);
}

SpectralSeries s_quadratic()
{
    return SpectralSeries({1.0, -0.477});
}

}  // namespace ebm
