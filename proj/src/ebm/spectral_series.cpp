#include "ebm/spectral_series.hpp"

#include "ebm/legendre.hpp"

#include <stdexcept>
#include <utility>

namespace ebm {

SpectralSeries::SpectralSeries(std::vector<double> coeffs) : coeffs_(std::move(coeffs))
{
    if (max_mode() > kMaxEvenMode)
        throw std::invalid_argument("SpectralSeries: too many modes");
}

double SpectralSeries::operator[](int n) const
{
    if (n < 0 || n > max_mode())
        return 0.0;
    return coeffs_[static_cast<std::size_t>(n)];
}

SpectralSeries SpectralSeries::truncated(int n) const
{
    std::vector<double> c(static_cast<std::size_t>(n) + 1, 0.0);
    for (int k = 0; k <= n; ++k)
        c[static_cast<std::size_t>(k)] = (*this)[k];
    return SpectralSeries(std::move(c));
}

double SpectralSeries::operator()(double y) const
{
    double acc = 0.0;
    for (int n = 0; n <= max_mode(); ++n)
        acc += coeffs_[static_cast<std::size_t>(n)] * legendre_poly(EvenMode(n))(y);
    return acc;
}

Polynomial SpectralSeries::as_polynomial() const
{
    Polynomial out;
    for (int n = 0; n <= max_mode(); ++n)
        out += coeffs_[static_cast<std::size_t>(n)] * legendre_poly(EvenMode(n));
    return out;
}

}  // namespace ebm
