#pragma once

#include <functional>
#include <vector>

#include "fpade/fixed_point.hpp"
#include "fpade/measures.hpp"
#include "fpade/multipoint_pade.hpp"

namespace fpade::detail {

/// Which node density drives the iteration.
enum class DensityKind { linear, nonlinear };

/// Node density on the Delta_0 rule, stored as log |rho| plus the sign of the
/// signed form of the density.
struct BranchDensity {
    std::vector<double> log_abs;
    std::vector<double> sign;
};

[[nodiscard]] int default_base_order(const AngelescoSystem& system, const MultiIndex& n, std::size_t j);

[[nodiscard]] BranchDensity branch_density(const AngelescoSystem& system, const MultipointPade& mp, std::size_t j,
                                           DensityKind kind, const Quadrature& base);

/// Zeros of the degree |n| + n_j orthogonal polynomial of rho_j dsigma_0.
[[nodiscard]] std::vector<double> mapped_nodes(const AngelescoSystem& system, const MultipointPade& mp,
                                               std::size_t j, DensityKind kind, int base_order);

/// Zeros of the orthonormal polynomial of sigma_0 of degree |n| + n_j, per branch.
[[nodiscard]] std::vector<NodeSet> canonical_start(const AngelescoSystem& system, const MultiIndex& n);

/// Sign changes of f sampled at `samples` Chebyshev points of the interval,
/// each bisected to 1e-13.
[[nodiscard]] std::vector<double> find_sign_changes(const std::function<double(double)>& f, const Interval& interval,
                                                    std::size_t samples);

/// sigma_j(x) - p_j(x)/q(x) on Delta_0 from the factored integral
/// representation, rescaled by a positive constant (signs and roots exact).
[[nodiscard]] std::function<double(double)> scaled_remainder_on_base(const AngelescoSystem& system,
                                                                     const MultipointPade& mp, std::size_t j);

/// sigma_j at x off Delta_j from the Gauss rule of the given order.
[[nodiscard]] double markov_fixed(const MeasureSpec& spec, int order, double x);

struct NodeIterationResult {
    MultipointPade mp;
    std::vector<IterationRecord> trace;
    std::vector<NodeSet> start;
    std::vector<int> base_orders;
};

/// Iterates X -> nodes of the density built from the multipoint approximant
/// at X until the displacement drops below options.tol.
[[nodiscard]] NodeIterationResult iterate_nodes(const AngelescoSystem& system, const MultiIndex& n,
                                                DensityKind kind, const FixedPointOptions& options,
                                                const std::vector<NodeSet>* start = nullptr);

} // namespace fpade::detail
