#pragma once

#include <initializer_list>
#include <span>
#include <vector>

namespace ebm {

/*!
 * Real polynomial in the monomial basis; coefficient k multiplies y^k.
 *
 * Trailing zeros are trimmed on construction, so degree() is exact. The zero
 * polynomial has no coefficients and degree -1.
 */
class Polynomial
{
  public:
    Polynomial() = default;
    explicit Polynomial(std::vector<double> coeffs);
    Polynomial(std::initializer_list<double> coeffs);

    static Polynomial constant(double c);
    static Polynomial monomial(int k, double c = 1.0);

    std::span<const double> coeffs() const { return coeffs_; }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }
    double coeff(int k) const;

    //! Horner evaluation.
    double operator()(double y) const;

    Polynomial derivative() const;
    //! Antiderivative vanishing at 0.
    Polynomial antiderivative() const;
    //! Definite integral over [a, b].
    double integral(double a, double b) const;

    Polynomial& operator+=(const Polynomial& other);
    Polynomial& operator-=(const Polynomial& other);
    Polynomial& operator*=(double scale);

    friend Polynomial operator+(Polynomial lhs, const Polynomial& rhs) { return lhs += rhs; }
    friend Polynomial operator-(Polynomial lhs, const Polynomial& rhs) { return lhs -= rhs; }
    friend Polynomial operator*(Polynomial lhs, double s) { return lhs *= s; }
    friend Polynomial operator*(double s, Polynomial rhs) { return rhs *= s; }
    friend Polynomial operator*(const Polynomial& lhs, const Polynomial& rhs);
    friend bool operator==(const Polynomial&, const Polynomial&) = default;

  private:
    void trim();

    std::vector<double> coeffs_;
};

}  // namespace ebm
