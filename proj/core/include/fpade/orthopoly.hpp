#pragma once

#include <complex>
#include <span>
#include <vector>

#include "fpade/measures.hpp"
#include "fpade/polynomial.hpp"

namespace fpade {

/// Orthonormal three-term recurrence
///   x l_k(x) = b_{k+1} l_{k+1}(x) + a_k l_k(x) + b_k l_{k-1}(x),  l_0 = 1/sqrt(norm0).
/// a holds a_0..a_n; b[k] holds b_{k+1} (the coupling between l_k and l_{k+1}).
struct RecurrenceTable {
    std::vector<double> a;
    std::vector<double> b;
    double norm0 = 1.0;

    [[nodiscard]] int max_degree() const noexcept { return static_cast<int>(a.size()) - 1; }
};

/// Coefficients for degrees 0..n_max. Jacobi weights use closed forms;
/// tabulated densities use Lanczos on a composite Gauss discretization that
/// is exact for piecewise-linear densities, cross-checked against a finer one.
[[nodiscard]] RecurrenceTable recurrence_coefficients(const MeasureSpec& spec, int n_max);

[[nodiscard]] double eval_orthonormal(const RecurrenceTable& table, int k, double x);
[[nodiscard]] std::complex<double> eval_orthonormal(const RecurrenceTable& table, int k, std::complex<double> z);
/// Writes l_0(x)..l_k(x) into out (size k + 1).
void eval_orthonormal_all(const RecurrenceTable& table, int k, double x, std::span<double> out);

/// Sum_k c_k l_k(x) by Clenshaw's recurrence.
[[nodiscard]] double orthonormal_series(const RecurrenceTable& table, std::span<const double> c, double x);

/// Functions of the second kind psi_k(t) = int l_k(x) dsigma(x) / (t - x) for
/// k = 0..k_max at a real t off the support, by backward continued fraction.
[[nodiscard]] std::vector<double> second_kind_functions(const MeasureSpec& spec, double t, int k_max);

/// Jacobi matrix of the discrete measure sum_i w_i delta_{x_i}: diagonal a
/// (size n) and off-diagonal b (size n - 1), by Lanczos with full
/// reorthogonalization.
struct JacobiMatrix {
    std::vector<double> a;
    std::vector<double> b;
};
[[nodiscard]] JacobiMatrix lanczos(std::span<const double> x, std::span<const double> w, int n);

/// Eigenvalues of a symmetric tridiagonal matrix, ascending.
[[nodiscard]] std::vector<double> tridiagonal_eigenvalues(const JacobiMatrix& J);

/// Zeros of the monic orthogonal polynomial of the given degree for the
/// discrete measure quad.weights[i] * weight_samples[i] at quad.nodes[i].
[[nodiscard]] std::vector<double> varying_orthogonal_zeros(const Quadrature& quad,
                                                           std::span<const double> weight_samples,
                                                           int degree);

/// Monic varying-measure orthogonal polynomial in the Chebyshev basis of the
/// quadrature interval, built from varying_orthogonal_zeros.
[[nodiscard]] PolynomialRep varying_monic_orthogonal(const Quadrature& quad,
                                                     std::span<const double> weight_samples, int degree);

/// Same polynomial from the (degree x degree) Chebyshev moment system solved
/// with full pivoting. Reference route; loses accuracy as degree grows.
[[nodiscard]] PolynomialRep varying_monic_orthogonal_moments(const Quadrature& quad,
                                                             std::span<const double> weight_samples,
                                                             int degree);

} // namespace fpade
