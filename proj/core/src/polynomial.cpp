#include "fpade/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "fpade/error.hpp"

namespace fpade {

namespace {

template <class T>
T clenshaw(const std::vector<double>& c, T s)
{
    const int n = static_cast<int>(c.size());
    if (n == 0) return T(0.0);
    T b1 = T(0.0), b2 = T(0.0);
    for (int k = n - 1; k >= 1; --k) {
        const T b = c[k] + 2.0 * s * b1 - b2;
        b2 = b1;
        b1 = b;
    }
    return c[0] + s * b1 - b2;
}

// Multiplies a Chebyshev series by s.
std::vector<double> times_s(const std::vector<double>& p)
{
    std::vector<double> out(p.size() + 1, 0.0);
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (k == 0) {
            out[1] += p[0];
        } else {
            out[k + 1] += 0.5 * p[k];
            out[k - 1] += 0.5 * p[k];
        }
    }
    return out;
}

std::vector<double> chebyshev_derivative(const std::vector<double>& c)
{
    const int n = static_cast<int>(c.size()) - 1;
    if (n <= 0) return {};
    std::vector<double> d(n + 1, 0.0);
    for (int k = n; k >= 1; --k) d[k - 1] = (k + 1 <= n ? d[k + 1] : 0.0) + 2.0 * k * c[k];
    d[0] *= 0.5;
    d.resize(n);
    return d;
}

} // namespace

PolynomialRep::PolynomialRep(Interval basis, std::vector<double> coeffs) : basis_(basis), coeffs_(std::move(coeffs)) {}

PolynomialRep PolynomialRep::from_roots(std::span<const double> roots, Interval basis, double lead)
{
    std::vector<double> p{lead};
    const double h = basis.half_width();
    for (double r : roots) {
        const double sr = basis.to_unit(r);
        std::vector<double> next = times_s(p);
        for (std::size_t k = 0; k < p.size(); ++k) next[k] -= sr * p[k];
        for (double& v : next) v *= h;
        p = std::move(next);
    }
    return PolynomialRep(basis, std::move(p));
}

PolynomialRep PolynomialRep::from_monomial(std::span<const double> monomial, Interval basis)
{
    if (monomial.empty()) return PolynomialRep(basis, {});
    const double c = basis.center(), h = basis.half_width();
    std::vector<double> p{monomial.back()};
    for (std::size_t i = monomial.size() - 1; i-- > 0;) {
        std::vector<double> next = times_s(p);
        for (double& v : next) v *= h;
        for (std::size_t k = 0; k < p.size(); ++k) next[k] += c * p[k];
        next[0] += monomial[i];
        p = std::move(next);
    }
    return PolynomialRep(basis, std::move(p));
}

PolynomialRep PolynomialRep::from_chebyshev_values(Interval basis, std::span<const double> values)
{
    const std::size_t n = values.size();
    std::vector<double> c(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        // chebyshev_points is ascending, so node j sits at angle pi - theta_j
        const double theta = std::numbers::pi * (static_cast<double>(n - 1 - j) + 0.5) / static_cast<double>(n);
        for (std::size_t k = 0; k < n; ++k) c[k] += values[j] * std::cos(static_cast<double>(k) * theta);
    }
    for (std::size_t k = 0; k < n; ++k) c[k] *= (k == 0 ? 1.0 : 2.0) / static_cast<double>(n);
    return PolynomialRep(basis, std::move(c));
}

int PolynomialRep::degree() const noexcept
{
    for (int k = static_cast<int>(coeffs_.size()) - 1; k >= 0; --k)
        if (std::abs(coeffs_[k]) > 1e-300) return k;
    return -1;
}

double PolynomialRep::operator()(double x) const noexcept { return clenshaw(coeffs_, basis_.to_unit(x)); }

std::complex<double> PolynomialRep::operator()(std::complex<double> z) const noexcept
{
    return clenshaw(coeffs_, (z - basis_.center()) / basis_.half_width());
}

double PolynomialRep::derivative(double x) const noexcept
{
    return clenshaw(chebyshev_derivative(coeffs_), basis_.to_unit(x)) / basis_.half_width();
}

double PolynomialRep::leading_coefficient() const noexcept
{
    const int d = degree();
    if (d < 0) return 0.0;
    if (d == 0) return coeffs_[0];
    return coeffs_[d] * std::pow(2.0, d - 1) / std::pow(basis_.half_width(), d);
}

bool PolynomialRep::is_monic(double tol) const noexcept { return std::abs(leading_coefficient() - 1.0) <= tol; }

PolynomialRep PolynomialRep::monic() const
{
    const double lc = leading_coefficient();
    if (lc == 0.0) fail(ErrorKind::numerical, "zero polynomial has no monic normalization");
    std::vector<double> c(coeffs_.begin(), coeffs_.begin() + degree() + 1);
    for (double& v : c) v /= lc;
    return PolynomialRep(basis_, std::move(c));
}

std::vector<double> PolynomialRep::to_monomial() const
{
    const int d = degree();
    if (d < 0) return {};
    const double c = basis_.center(), h = basis_.half_width();
    // Clenshaw with polynomial-valued accumulators; s = (x - c) / h.
    auto mul_s = [&](const std::vector<double>& p) {
        std::vector<double> out(p.size() + 1, 0.0);
        for (std::size_t k = 0; k < p.size(); ++k) {
            out[k + 1] += p[k] / h;
            out[k] -= c / h * p[k];
        }
        return out;
    };
    auto axpy = [](std::vector<double> a, const std::vector<double>& b, double s) {
        if (a.size() < b.size()) a.resize(b.size(), 0.0);
        for (std::size_t k = 0; k < b.size(); ++k) a[k] += s * b[k];
        return a;
    };
    std::vector<double> b1, b2;
    for (int k = d; k >= 1; --k) {
        std::vector<double> b{coeffs_[k]};
        b = axpy(b, mul_s(b1), 2.0);
        b = axpy(b, b2, -1.0);
        b2 = std::move(b1);
        b1 = std::move(b);
    }
    std::vector<double> out{coeffs_[0]};
    out = axpy(out, mul_s(b1), 1.0);
    out = axpy(out, b2, -1.0);
    out.resize(d + 1);
    return out;
}

PolynomialRep PolynomialRep::rebased(const Interval& basis) const
{
    const int d = std::max(degree(), 0);
    return interpolate(basis, d, [this](double x) { return (*this)(x); });
}

PolynomialRep operator*(const PolynomialRep& a, const PolynomialRep& b)
{
    const PolynomialRep bb = (a.basis() == b.basis()) ? b : b.rebased(a.basis());
    const auto& ca = a.coeffs();
    const auto& cb = bb.coeffs();
    if (ca.empty() || cb.empty()) return PolynomialRep(a.basis(), {});
    std::vector<double> out(ca.size() + cb.size() - 1, 0.0);
    for (std::size_t i = 0; i < ca.size(); ++i) {
        for (std::size_t j = 0; j < cb.size(); ++j) {
            const double v = 0.5 * ca[i] * cb[j];
            out[i + j] += v;
            out[i > j ? i - j : j - i] += v;
        }
    }
    return PolynomialRep(a.basis(), std::move(out));
}

std::vector<double> chebyshev_points(const Interval& interval, std::size_t n)
{
    std::vector<double> x(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double s = -std::cos(std::numbers::pi * (static_cast<double>(j) + 0.5) / static_cast<double>(n));
        x[j] = interval.from_unit(s);
    }
    return x;
}

std::vector<double> poly_zeros(const PolynomialRep& p, bool require_real)
{
    const int d = p.degree();
    if (d < 1) fail(ErrorKind::validation, "zeros requested for a polynomial of degree < 1");
    const auto& c = p.coeffs();
    std::vector<double> roots_s;
    if (d == 1) {
        roots_s.push_back(-c[0] / c[1]);
    } else {
        Eigen::MatrixXd M = Eigen::MatrixXd::Zero(d, d);
        M(0, 1) = 1.0;
        for (int i = 1; i < d - 1; ++i) {
            M(i, i - 1) = 0.5;
            M(i, i + 1) = 0.5;
        }
        M(d - 1, d - 2) = 0.5;
        for (int k = 0; k < d; ++k) M(d - 1, k) -= c[k] / (2.0 * c[d]);
        Eigen::EigenSolver<Eigen::MatrixXd> es(M, false);
        if (es.info() != Eigen::Success) fail(ErrorKind::numerical, "colleague eigenvalue iteration failed");
        for (Eigen::Index i = 0; i < d; ++i) {
            const auto lam = es.eigenvalues()[i];
            if (std::abs(lam.imag()) > 2e-8) {
                if (require_real)
                    fail(ErrorKind::structural, "polynomial has a nonreal zero with imaginary part " +
                                                    std::to_string(lam.imag() * p.basis().half_width()));
                continue;
            }
            roots_s.push_back(lam.real());
        }
    }
    const auto dc = chebyshev_derivative(c);
    std::vector<double> out;
    out.reserve(roots_s.size());
    for (double s : roots_s) {
        const double f = clenshaw(c, s);
        const double df = clenshaw(dc, s);
        if (df != 0.0) {
            const double step = f / df;
            if (std::abs(step) < 1e-6) s -= step;
        }
        out.push_back(p.basis().from_unit(s));
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace fpade
