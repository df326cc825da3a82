#include "ebm/polynomial.hpp"

#include <algorithm>
#include <cstddef>
#include <utility>

namespace ebm {

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs))
{
    trim();
}

Polynomial::Polynomial(std::initializer_list<double> coeffs) : coeffs_(coeffs)
{
    trim();
}

Polynomial Polynomial::constant(double c)
{
    return Polynomial(std::vector<double>{c});
}

Polynomial Polynomial::monomial(int k, double c)
{
    std::vector<double> v(static_cast<std::size_t>(k) + 1, 0.0);
    v.back() = c;
    return Polynomial(std::move(v));
}

double Polynomial::coeff(int k) const
{
    if (k < 0 || k > degree())
        return 0.0;
    return coeffs_[static_cast<std::size_t>(k)];
}

double Polynomial::operator()(double y) const
{
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
        acc = acc * y + *it;
    return acc;
}

Polynomial Polynomial::derivative() const
{
    if (coeffs_.size() <= 1)
        return {};
    std::vector<double> d(coeffs_.size() - 1);
    for (std::size_t k = 1; k < coeffs_.size(); ++k)
        d[k - 1] = static_cast<double>(k) * coeffs_[k];
    return Polynomial(std::move(d));
}

Polynomial Polynomial::antiderivative() const
{
    if (coeffs_.empty())
        return {};
    std::vector<double> a(coeffs_.size() + 1, 0.0);
    for (std::size_t k = 0; k < coeffs_.size(); ++k)
        a[k + 1] = coeffs_[k] / static_cast<double>(k + 1);
    return Polynomial(std::move(a));
}

double Polynomial::integral(double a, double b) const
{
    const Polynomial anti = antiderivative();
    return anti(b) - anti(a);
}

Polynomial& Polynomial::operator+=(const Polynomial& other)
{
    if (other.coeffs_.size() > coeffs_.size())
        coeffs_.resize(other.coeffs_.size(), 0.0);
    for (std::size_t k = 0; k < other.coeffs_.size(); ++k)
        coeffs_[k] += other.coeffs_[k];
    trim();
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other)
{
    if (other.coeffs_.size() > coeffs_.size())
        coeffs_.resize(other.coeffs_.size(), 0.0);
    for (std::size_t k = 0; k < other.coeffs_.size(); ++k)
        coeffs_[k] -= other.coeffs_[k];
    trim();
    return *this;
}

Polynomial& Polynomial::operator*=(double scale)
{
    for (double& c : coeffs_)
        c *= scale;
    trim();
    return *this;
}

Polynomial operator*(const Polynomial& lhs, const Polynomial& rhs)
{
    if (lhs.is_zero() || rhs.is_zero())
        return {};
    std::vector<double> out(lhs.coeffs_.size() + rhs.coeffs_.size() - 1, 0.0);
    for (std::size_t i = 0; i < lhs.coeffs_.size(); ++i)
        for (std::size_t j = 0; j < rhs.coeffs_.size(); ++j)
            out[i + j] += lhs.coeffs_[i] * rhs.coeffs_[j];
    return Polynomial(std::move(out));
}

void Polynomial::trim()
{
    while (!coeffs_.empty() && coeffs_.back() == 0.0)
        coeffs_.pop_back();
}

}  // namespace ebm
