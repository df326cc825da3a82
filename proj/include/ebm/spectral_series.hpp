#pragma once

#include "ebm/polynomial.hpp"

#include <span>
#include <vector>

namespace ebm {

//! Finite series sum_n c_{2n} p_{2n}(y) over even Legendre modes.
class SpectralSeries
{
  public:
    SpectralSeries() = default;
    explicit SpectralSeries(std::vector<double> coeffs);

    //! Coefficient c_{2n}; zero beyond the stored modes.
    double operator[](int n) const;
    int max_mode() const { return static_cast<int>(coeffs_.size()) - 1; }
    std::span<const double> coeffs() const { return coeffs_; }

    //! Keeps modes 0..n (pads with zeros if shorter).
    SpectralSeries truncated(int n) const;

    double operator()(double y) const;
    Polynomial as_polynomial() const;

    friend bool operator==(const SpectralSeries&, const SpectralSeries&) = default;

  private:
    std::vector<double> coeffs_;
};

}  // namespace ebm
