#pragma once

#include "ebm/polynomial.hpp"
#include "ebm/spectral_series.hpp"

#include <optional>
#include <variant>
#include <vector>

namespace ebm {

//! alpha1 south of the ice line, alpha2 on the ice.
struct BudykoAlbedo
{
    double alpha1 = 0.32;
    double alpha2 = 0.62;
};

//! Adds bare (snow-free) ice of albedo alphai equatorward of y = rho.
struct JormungandAlbedo
{
    double alpha1 = 0.32;
    double alphai = 0.36;
    double alpha2 = 0.8;
    double rho = 0.35;
};

using AlbedoSpec = std::variant<BudykoAlbedo, JormungandAlbedo>;

void validate(const AlbedoSpec& spec);

//! Switching latitude rho, if the albedo has one.
std::optional<double> switching_latitude(const AlbedoSpec& spec);

/*!
 * Piecewise-constant albedo at latitude y for ice line eta. At an interior
 * jump the mean of the two one-sided values is returned.
 */
double pointwise_albedo(const AlbedoSpec& spec, double y, double eta);

/*!
 * Legendre moments (4n+1) int_0^1 alpha(y, eta) s(y) p_{2n}(y) dy as
 * polynomials in eta.
 *
 * `below` holds the branch used for eta < rho, `above` the branch for
 * eta >= rho. Without a switching latitude both hold the same polynomials.
 */
struct AlbedoMoments
{
    std::vector<Polynomial> below;
    std::vector<Polynomial> above;
    std::optional<double> rho;

    int max_mode() const { return static_cast<int>(above.size()) - 1; }
    const Polynomial& active(int n, double eta) const
    {
        return (rho && eta < *rho) ? below[static_cast<std::size_t>(n)]
                                   : above[static_cast<std::size_t>(n)];
    }
};

AlbedoMoments budyko_moments(const BudykoAlbedo& spec, const SpectralSeries& s, int max_mode);
AlbedoMoments jormungand_moments(const JormungandAlbedo& spec, const SpectralSeries& s,
                                 int max_mode);
AlbedoMoments albedo_moments(const AlbedoSpec& spec, const SpectralSeries& s, int max_mode);

}  // namespace ebm
