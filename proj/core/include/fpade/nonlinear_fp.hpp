#pragma once

#include <vector>

#include "fpade/fixed_point.hpp"
#include "fpade/measures.hpp"
#include "fpade/multipoint_pade.hpp"
#include "fpade/polynomial.hpp"

namespace fpade {

/// Non-linear Fourier-Pade approximant: c_k(sigma_j - S_j/T) = 0 for
/// k < |n| + n_j, found as a fixed point of the node map.
struct NonlinearFPApproximant {
    MultiIndex n{std::vector<int>{0}};
    /// Monic, Chebyshev basis of the hull of the system.
    PolynomialRep T{Interval(-1.0, 1.0)};
    /// Chebyshev basis of Delta_0.
    std::vector<PolynomialRep> S;
    /// Factored form; its node sets are the fixed point (w_{n,j} = Omega_{n,j}).
    MultipointPade interpolant;
    /// Node sets the iteration started from.
    std::vector<NodeSet> start;
    std::vector<IterationRecord> trace;
    /// Gauss orders on Delta_0 used for Omega_{n,j}, per branch.
    std::vector<int> base_orders;
};

/// Omega_{n,j}: monic of degree |n| + n_j, orthogonal on Delta_0 against
/// rho_j dsigma0 where
///   rho_j(y) = 1 / (q_j(y)^2 |q~_j(y)|) * int q_j(x)^2 / |y - x| * |q~_j(x)| / |w_j(x)| dsigma_j(x).
/// The signed form of the density is checked for constant sign first.
/// base_order = 0 picks the Gauss order on Delta_0 from the geometry.
[[nodiscard]] PolynomialRep omega_polynomial(const MultipointPade& mp, const AngelescoSystem& system, std::size_t j,
                                             int base_order = 0);
/// Zeros of omega_polynomial, computed without forming its coefficients.
[[nodiscard]] std::vector<double> omega_zeros(const MultipointPade& mp, const AngelescoSystem& system, std::size_t j,
                                              int base_order = 0);

/// rho_j at the given points of Delta_0 (absolute values).
[[nodiscard]] std::vector<double> omega_density(const MultipointPade& mp, const AngelescoSystem& system,
                                                std::size_t j, const std::vector<double>& points);

/// Damped iteration X <- X + damping (Y - X), Y = zeros of Omega_{n,j}, from
/// the zeros of the orthonormal polynomials of sigma0 (or `start` when given).
[[nodiscard]] NonlinearFPApproximant fixed_point_solve(const AngelescoSystem& system, const MultiIndex& n,
                                                       const FixedPointOptions& options = {},
                                                       const std::vector<NodeSet>* start = nullptr);

/// Multipoint approximant at the given nodes wrapped as a candidate (no iteration).
[[nodiscard]] NonlinearFPApproximant nonlinear_candidate(const AngelescoSystem& system, const MultiIndex& n,
                                                         const std::vector<NodeSet>& nodes);

/// max over j and k < |n| + n_j of |c_k(sigma_j - S_j/T)|.
[[nodiscard]] double residual_check(const NonlinearFPApproximant& approx, const AngelescoSystem& system);

/// max over j of the distance between the Omega zeros of the final
/// approximant and its node sets.
[[nodiscard]] double self_consistency(const NonlinearFPApproximant& approx, const AngelescoSystem& system);

/// sigma_j(z) - S_j(z)/T(z), evaluated directly.
[[nodiscard]] Complex remainder(const NonlinearFPApproximant& approx, const AngelescoSystem& system, std::size_t j,
                                Complex z);

enum class RemainderForm {
    /// Factored integral representation through the node polynomial; the
    /// only form that stays well conditioned on Delta_0 as |n| grows.
    integral,
    /// sigma_j - S_j/T from the stored polynomials; the remainder drops below
    /// roundoff relative to sigma_j once |n| exceeds about 4.
    direct,
};

/// Sign changes of sigma_j - S_j/T on Delta_0, sampled at 64 (|n| + n_j)
/// Chebyshev points and bisected to 1e-13.
[[nodiscard]] std::vector<double> remainder_sign_changes(const NonlinearFPApproximant& approx,
                                                         const AngelescoSystem& system, std::size_t j,
                                                         RemainderForm form = RemainderForm::integral);

} // namespace fpade
