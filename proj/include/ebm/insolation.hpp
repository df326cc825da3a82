#pragma once

#include "ebm/quadrature.hpp"
#include "ebm/spectral_series.hpp"

namespace ebm {

inline constexpr double kDefaultObliquityDeg = 23.5;

//! Annual-mean insolation distribution: exact integral or a fixed series.
struct InsolationSpec
{
    enum class Mode
    {
        ExactIntegral,
        Truncated,
    };

    double beta_deg = kDefaultObliquityDeg;
    Mode mode = Mode::Truncated;
    SpectralSeries truncated{std::vector<double>{1.0, -0.477}};

    void validate() const;
};

/*!
 * s(y) = (2/pi^2) * int_0^{2 pi} sqrt(1 - (sqrt(1-y^2) sin(beta) cos(g)
 *        - y cos(beta))^2) dg, normalized so that int_0^1 s = 1.
 */
double s_exact(double beta_deg, double y, double tol = 1e-12);
double s_exact(const InsolationSpec& spec, double y);

//! s_{2n} = (4n+1) int_0^1 s(y) p_{2n}(y) dy for n = 0..max_mode.
//! A truncated spec returns its fixed series unchanged.
SpectralSeries s_coefficients(double beta_deg, int max_mode, double tol = 1e-10);
SpectralSeries s_coefficients(const InsolationSpec& spec, int max_mode);

//! {s_0 = 1, s_2 = -0.477}.
SpectralSeries s_quadratic();

//! Latitude (sine) of the polar circle, where s(y) has a kink.
double polar_circle(double beta_deg);

}  // namespace ebm
