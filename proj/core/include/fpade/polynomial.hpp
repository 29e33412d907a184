#pragma once

#include <complex>
#include <span>
#include <vector>

#include "fpade/measures.hpp"

namespace fpade {

/// Real polynomial sum_k c_k T_k(s), s the unit variable of `basis`.
/// An empty coefficient list is the zero polynomial (degree -1).
class PolynomialRep {
public:
    explicit PolynomialRep(Interval basis, std::vector<double> coeffs = {});

    /// lead * prod (x - r_i).
    static PolynomialRep from_roots(std::span<const double> roots, Interval basis, double lead = 1.0);
    /// Coefficients of 1, x, x^2, ... in the ordinary variable x.
    static PolynomialRep from_monomial(std::span<const double> monomial, Interval basis);
    /// Interpolant of degree `degree` at the Chebyshev points of the first kind.
    template <class F>
    static PolynomialRep interpolate(Interval basis, int degree, F&& f);
    /// Interpolant through values taken at chebyshev_points(basis, values.size()).
    static PolynomialRep from_chebyshev_values(Interval basis, std::span<const double> values);

    [[nodiscard]] const Interval& basis() const noexcept { return basis_; }
    [[nodiscard]] const std::vector<double>& coeffs() const noexcept { return coeffs_; }
    /// Index of the last coefficient above 1e-300 in magnitude.
    [[nodiscard]] int degree() const noexcept;

    [[nodiscard]] double operator()(double x) const noexcept;
    [[nodiscard]] std::complex<double> operator()(std::complex<double> z) const noexcept;
    [[nodiscard]] double derivative(double x) const noexcept;

    /// Coefficient of x^degree.
    [[nodiscard]] double leading_coefficient() const noexcept;
    [[nodiscard]] bool is_monic(double tol = 1e-10) const noexcept;
    [[nodiscard]] PolynomialRep monic() const;
    [[nodiscard]] std::vector<double> to_monomial() const;
    /// Same polynomial expressed in the Chebyshev basis of another interval.
    [[nodiscard]] PolynomialRep rebased(const Interval& basis) const;

    friend PolynomialRep operator*(const PolynomialRep& a, const PolynomialRep& b);

private:
    Interval basis_;
    std::vector<double> coeffs_;
};

/// n Chebyshev points of the first kind on the interval, ascending.
[[nodiscard]] std::vector<double> chebyshev_points(const Interval& interval, std::size_t n);

/// Zeros from the colleague matrix followed by one Newton step each, sorted
/// ascending. With require_real, an eigenvalue whose imaginary part exceeds
/// 1e-8 times the interval length raises a structural error; otherwise
/// complex zeros are dropped.
[[nodiscard]] std::vector<double> poly_zeros(const PolynomialRep& p, bool require_real = true);

template <class F>
PolynomialRep PolynomialRep::interpolate(Interval basis, int degree, F&& f)
{
    const auto pts = chebyshev_points(basis, static_cast<std::size_t>(degree + 1));
    std::vector<double> values(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) values[i] = f(pts[i]);
    return from_chebyshev_values(basis, values);
}

} // namespace fpade
