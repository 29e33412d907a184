#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "fpade/error.hpp"
#include "fpade/polynomial.hpp"

using namespace fpade;

TEST(Polynomial, RootsRoundTrip)
{
    const std::vector<double> roots = {-2.7, -2.2, 0.1, 2.05, 2.9};
    const auto p = PolynomialRep::from_roots(roots, Interval(-3, 3));
    EXPECT_EQ(p.degree(), 5);
    EXPECT_TRUE(p.is_monic());
    const auto z = poly_zeros(p);
    ASSERT_EQ(z.size(), roots.size());
    for (std::size_t i = 0; i < z.size(); ++i) EXPECT_NEAR(z[i], roots[i], 1e-13);
}

TEST(Polynomial, EmptyRootsAreConstant)
{
    const auto p = PolynomialRep::from_roots({}, Interval(0, 1), 2.5);
    EXPECT_EQ(p.degree(), 0);
    EXPECT_DOUBLE_EQ(p(0.3), 2.5);
    EXPECT_EQ(PolynomialRep(Interval(0, 1)).degree(), -1);
}

TEST(Polynomial, MonomialConversion)
{
    const std::vector<double> mono = {6.0, -5.0, 1.0}; // (x - 2)(x - 3)
    const auto p = PolynomialRep::from_monomial(mono, Interval(-1, 4));
    EXPECT_NEAR(p(2.0), 0.0, 1e-14);
    EXPECT_NEAR(p(3.0), 0.0, 1e-14);
    EXPECT_NEAR(p.leading_coefficient(), 1.0, 1e-14);
    const auto back = p.to_monomial();
    ASSERT_GE(back.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(back[i], mono[i], 1e-13);
}

TEST(Polynomial, ProductRebaseAndDerivative)
{
    const Interval I(-3, 3);
    const auto a = PolynomialRep::from_roots(std::vector<double>{-2.5, 1.0}, I);
    const auto b = PolynomialRep::from_roots(std::vector<double>{0.5}, I, 3.0);
    const auto ab = a * b;
    EXPECT_EQ(ab.degree(), 3);
    const auto r = ab.rebased(Interval(2, 3));
    for (double x : {-2.9, -1.0, 0.0, 2.7, 5.0}) {
        const double exact = 3.0 * (x + 2.5) * (x - 1.0) * (x - 0.5);
        EXPECT_NEAR(ab(x), exact, 1e-12 * (1 + std::abs(exact)));
        EXPECT_NEAR(r(x), exact, 1e-10 * (1 + std::abs(exact)));
        const double h = 1e-6;
        EXPECT_NEAR(ab.derivative(x), (ab(x + h) - ab(x - h)) / (2 * h), 1e-6 * (1 + std::abs(exact)));
    }
    EXPECT_NEAR(ab.monic().leading_coefficient(), 1.0, 1e-14);
}

TEST(Polynomial, ComplexEvaluation)
{
    const auto p = PolynomialRep::from_roots(std::vector<double>{-1.0, 1.0}, Interval(-1, 1));
    const std::complex<double> z(0.0, 1.0);
    EXPECT_NEAR(std::abs(p(z) - (z * z - 1.0)), 0.0, 1e-15);
}

TEST(Polynomial, InterpolationIsExactForPolynomials)
{
    const auto p = PolynomialRep::interpolate(Interval(2, 3), 4, [](double x) { return x * x * x - 2 * x + 1; });
    ASSERT_EQ(p.coeffs().size(), 5u);
    EXPECT_LT(std::abs(p.coeffs()[4]), 1e-14);
    EXPECT_NEAR(p(2.4), 2.4 * 2.4 * 2.4 - 4.8 + 1, 1e-12);
    const auto pts = chebyshev_points(Interval(2, 3), 7);
    for (std::size_t i = 1; i < pts.size(); ++i) EXPECT_LT(pts[i - 1], pts[i]);
    EXPECT_GT(pts.front(), 2.0);
    EXPECT_LT(pts.back(), 3.0);
}

TEST(Polynomial, ComplexZerosRejectedOrDropped)
{
    const auto p = PolynomialRep::from_monomial(std::vector<double>{1.0, 0.0, 1.0}, Interval(-1, 1));
    try {
        (void)poly_zeros(p, true);
        FAIL() << "complex zeros accepted";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::structural);
    }
    EXPECT_TRUE(poly_zeros(p, false).empty());
}

TEST(Polynomial, ChebyshevT2Zeros)
{
    const auto t2 = PolynomialRep(Interval(-1, 1), {0.0, 0.0, 1.0});
    const auto z = poly_zeros(t2);
    ASSERT_EQ(z.size(), 2u);
    EXPECT_NEAR(z[0], -std::sqrt(0.5), 1e-15);
    EXPECT_NEAR(z[1], std::sqrt(0.5), 1e-15);
}
