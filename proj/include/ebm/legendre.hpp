#pragma once

#include "ebm/polynomial.hpp"

#include <stdexcept>

namespace ebm {

//! Highest even mode index supported (p_24, degree 24).
inline constexpr int kMaxEvenMode = 12;

//! Index n of the even Legendre polynomial p_{2n}.
class EvenMode
{
  public:
    constexpr explicit EvenMode(int n) : n_(n)
    {
        if (n < 0 || n > kMaxEvenMode)
            throw std::invalid_argument("EvenMode: index out of range");
    }
    constexpr int index() const { return n_; }
    constexpr int degree() const { return 2 * n_; }

  private:
    int n_;
};

//! p_{2n} in monomial form, normalized so p_{2n}(1) = 1.
const Polynomial& legendre_poly(EvenMode mode);

//! P_{2n}(eta) = integral of p_{2n} over [0, eta].
const Polynomial& legendre_antideriv(EvenMode mode);

//! Eigenvalue 2n(2n+1) of -d/dy (1-y^2) d/dy for p_{2n}.
constexpr double diffusion_eigenvalue(EvenMode mode)
{
    const double l = mode.degree();
    return l * (l + 1.0);
}

}  // namespace ebm
