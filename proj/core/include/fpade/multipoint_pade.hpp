#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fpade/measures.hpp"
#include "fpade/polynomial.hpp"

namespace fpade {

/// Largest |n| accepted by the solvers.
inline constexpr int kMaxTotalDegree = 50;

class MultiIndex {
public:
    explicit MultiIndex(std::vector<int> n);

    [[nodiscard]] std::size_t m() const noexcept { return n_.size(); }
    [[nodiscard]] int operator[](std::size_t j) const { return n_.at(j); }
    [[nodiscard]] int total() const noexcept { return total_; }
    /// |n| + n_j, the number of interpolation nodes of branch j.
    [[nodiscard]] int node_count(std::size_t j) const { return total_ + n_.at(j); }
    [[nodiscard]] const std::vector<int>& values() const noexcept { return n_; }
    [[nodiscard]] std::string str() const;

private:
    std::vector<int> n_;
    int total_ = 0;
};

/// Interpolation nodes of one branch on Delta_0, ascending.
struct NodeSet {
    std::vector<double> nodes;
};

/// prod_i (z - r_i); empty product is 1.
template <class T>
[[nodiscard]] T root_product(std::span<const double> roots, T z)
{
    T v = T(1.0);
    for (double r : roots) v *= (z - r);
    return v;
}

/// log prod_i |z - r_i|.
template <class T>
[[nodiscard]] double log_root_product(std::span<const double> roots, T z)
{
    double v = 0.0;
    for (double r : roots) v += std::log(std::abs(z - r));
    return v;
}

struct MultipointOptions {
    /// Gauss order on each Delta_j; 0 derives it from the geometry and degrees.
    int branch_order = 0;
    int max_sweeps = 300;
    /// Block sweeps stop once no zero moves by more than this fraction of its interval.
    double sweep_tol = 1e-15;
    /// Optional warm start: zeros of q inside each Delta_j.
    std::vector<std::vector<double>> initial_zeros;
};

/// Simultaneous multipoint Pade approximant p_j / q interpolating the Markov
/// functions at the zeros of the node polynomials w_j. The denominator is kept
/// in factored form, q = q_j * q~_j for every branch.
struct MultipointPade {
    MultiIndex n{std::vector<int>{0}};
    /// Zeros of q inside each Delta_j, ascending (the zeros of q_{n,j}).
    std::vector<std::vector<double>> q_zeros;
    std::vector<NodeSet> node_sets;
    /// Monic denominator in the Chebyshev basis of the hull of all intervals.
    PolynomialRep q{Interval(-1.0, 1.0)};
    /// Numerators in the Chebyshev basis of Delta_0.
    std::vector<PolynomialRep> p;
    std::vector<int> branch_orders;
    int sweeps = 0;
    /// Largest normalized residual of int T_k q / w_j dsigma_j over k < n_j.
    double orto_total_residual = 0.0;

    [[nodiscard]] std::size_t m() const noexcept { return q_zeros.size(); }
    [[nodiscard]] std::vector<double> all_zeros() const;

    template <class T>
    [[nodiscard]] T q_at(T z) const
    {
        T v = T(1.0);
        for (const auto& zs : q_zeros) v *= root_product<T>(zs, z);
        return v;
    }
    /// q_{n,j}(z)
    template <class T>
    [[nodiscard]] T q_branch(std::size_t j, T z) const
    {
        return root_product<T>(q_zeros[j], z);
    }
    /// q~_{n,j}(z) = q(z) / q_{n,j}(z)
    template <class T>
    [[nodiscard]] T q_cofactor(std::size_t j, T z) const
    {
        T v = T(1.0);
        for (std::size_t k = 0; k < q_zeros.size(); ++k)
            if (k != j) v *= root_product<T>(q_zeros[k], z);
        return v;
    }
    /// w_{n,j}(z)
    template <class T>
    [[nodiscard]] T w_at(std::size_t j, T z) const
    {
        return root_product<T>(node_sets[j].nodes, z);
    }
    [[nodiscard]] double log_abs_cofactor(std::size_t j, double x) const;
};

/// Default Gauss order on Delta_j for a given multi-index.
[[nodiscard]] int default_branch_order(const AngelescoSystem& system, const MultiIndex& n, std::size_t j);

/// Solves the orthogonality conditions int x^k q(x) / w_j(x) dsigma_j(x) = 0,
/// k < n_j, by block Gauss-Seidel sweeps over the factors q_{n,j}, each a
/// monic orthogonal polynomial for the varying weight |q~_j| / |w_j| dsigma_j.
[[nodiscard]] MultipointPade solve_multipoint(const AngelescoSystem& system, const MultiIndex& n,
                                              const std::vector<NodeSet>& node_sets,
                                              const MultipointOptions& options = {});

/// p_j(z) from its defining integral
///   p_j(z) = int (q(z) w_j(t) - w_j(z) q(t)) / ((z - t) w_j(t)) dsigma_j(t),
/// accurate anywhere off Delta_j; the stored series is meant for Delta_0.
[[nodiscard]] Complex numerator_at(const MultipointPade& mp, const AngelescoSystem& system, std::size_t j,
                                   Complex z);

/// sigma_j(z) - p_j(z)/q(z) evaluated directly (first) and through the
/// factored integral representation (second).
[[nodiscard]] std::pair<Complex, Complex> remainder_identity_residual(const MultipointPade& mp,
                                                                      const AngelescoSystem& system, std::size_t j,
                                                                      Complex z);

/// Factored integral representation of the remainder at z.
[[nodiscard]] Complex remainder_integral(const MultipointPade& mp, const AngelescoSystem& system, std::size_t j,
                                         Complex z);

/// log |remainder| at z from the integral representation, safe against
/// overflow and underflow of the individual factors.
[[nodiscard]] double log_abs_remainder(const MultipointPade& mp, const AngelescoSystem& system, std::size_t j,
                                       Complex z);

/// (q_{n,j}, q~_{n,j}) in the basis of q.
[[nodiscard]] std::pair<PolynomialRep, PolynomialRep> split_denominator(const MultipointPade& mp,
                                                                        const AngelescoSystem& system,
                                                                        std::size_t j);

/// Throws a pole error when z lies within 1e-12 (relative to the hull) of a
/// zero of q, and a domain error when z lies on one of the intervals.
void check_evaluation_point(const MultipointPade& mp, const AngelescoSystem& system, Complex z);

} // namespace fpade
