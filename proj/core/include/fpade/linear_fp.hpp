#pragma once

#include <functional>
#include <vector>

#include "fpade/fixed_point.hpp"
#include "fpade/measures.hpp"
#include "fpade/multipoint_pade.hpp"
#include "fpade/polynomial.hpp"

namespace fpade {

/// Linear Fourier-Pade approximant: Q monic of degree |n| and P_j of degree
/// at most |n| - 1 with c_k(Q sigma_j - P_j) = 0 for k < |n| + n_j.
struct LinearFPApproximant {
    MultiIndex n{std::vector<int>{0}};
    /// Monic, Chebyshev basis of the hull of the system.
    PolynomialRep Q{Interval(-1.0, 1.0)};
    /// Chebyshev basis of Delta_0.
    std::vector<PolynomialRep> P;
    /// Factored form of (Q, P); its node sets are the sign changes W_{n,j}.
    MultipointPade interpolant;
    /// |c_k(Q sigma_j - P_j)| for k = |n| .. |n| + n_j - 1, indexed [j][k - |n|].
    std::vector<std::vector<double>> fourier_residuals;
    /// |int Q psi_k dsigma_j| / int |Q psi_k| dsigma_j for the same (j, k).
    std::vector<std::vector<double>> fourier_relative;
    std::vector<IterationRecord> trace;

    [[nodiscard]] double max_fourier_residual() const;
};

/// Options tuned for the linear problem: the node map contracts fast, so the
/// default tolerance sits near roundoff.
[[nodiscard]] FixedPointOptions linear_default_options();

/// c_0..c_{k_max} of f against the orthonormal polynomials of sigma0. With
/// `refine`, the rule is doubled from `order` until no coefficient moves by
/// more than 1e-12 of its absolute integrand sum_i w_i |f(x_i) l_k(x_i)|;
/// otherwise the order-`order` rule is used as is (for integrands that are
/// themselves at roundoff level).
[[nodiscard]] std::vector<double> fourier_coefficients(const MeasureSpec& sigma0,
                                                       const std::function<double(double)>& f, int k_max,
                                                       int order = 64, bool refine = true);

/// Fixed Gauss order on Delta_0 used for residual coefficients of branch j.
[[nodiscard]] int residual_order(const AngelescoSystem& system, const MultiIndex& n, std::size_t j);

/// c_k(Q sigma_j) = int Q(x) sigma_j(x) l_k(x) dsigma0(x).
[[nodiscard]] double fourier_coefficient(const AngelescoSystem& system, const PolynomialRep& Q, std::size_t j,
                                         int k);

/// Solves the linear conditions through the equivalent interpolation problem:
/// the node sets are iterated until they coincide with the sign changes of
/// Q sigma_j - P_j on Delta_0. Throws a validation error for |n| > 50 and a
/// non_convergence error carrying the displacement trace.
[[nodiscard]] LinearFPApproximant solve_linear_fp(const AngelescoSystem& system, const MultiIndex& n,
                                                  const FixedPointOptions& options = linear_default_options());

/// sigma_j(z) - P_j(z)/Q(z), evaluated directly.
[[nodiscard]] Complex remainder(const LinearFPApproximant& approx, const AngelescoSystem& system, std::size_t j,
                                Complex z);

/// Same remainder from the factored integral representation.
[[nodiscard]] Complex remainder_integral(const LinearFPApproximant& approx, const AngelescoSystem& system,
                                         std::size_t j, Complex z);

/// How the remainder is evaluated on Delta_0 when locating its sign changes.
enum class SignChangeRoute {
    /// Q times the factored integral representation of sigma_j - P_j/Q;
    /// well conditioned for every supported |n|.
    integral,
    /// Q sigma_j - P_j from the stored polynomials; the remainder drops below
    /// roundoff relative to Q sigma_j once |n| exceeds about 4.
    direct,
    /// Expansion sum_{k >= |n| + n_j} c_k l_k with c_k = -int Q psi_k dsigma_j;
    /// independent of P and of the node sets, but the sum cancels heavily on
    /// Delta_0 and loses the count near |n| = 12.
    series,
};

/// Sign changes of Q sigma_j - P_j on Delta_0, sampled at 64 (|n| + n_j)
/// Chebyshev points and bisected to 1e-13. No count check.
[[nodiscard]] std::vector<double> remainder_sign_changes(const LinearFPApproximant& approx,
                                                         const AngelescoSystem& system, std::size_t j,
                                                         SignChangeRoute route = SignChangeRoute::integral);

/// Monic W_{n,j} through the sign changes; a structural error reports the
/// count when it differs from |n| + n_j.
[[nodiscard]] PolynomialRep sign_change_polynomial(const LinearFPApproximant& approx, const AngelescoSystem& system,
                                                   std::size_t j, SignChangeRoute route = SignChangeRoute::integral);

/// Asserts deg q = |n| (monic) and exactly n_j simple zeros in each open Delta_j.
void check_zero_localization(const MultipointPade& mp, const AngelescoSystem& system);

} // namespace fpade
