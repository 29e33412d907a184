#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "fpade/measures.hpp"

namespace fpade {

/// Limit proportions p_j = lim n_j / |n|, each in (0, 1), summing to one.
class RayVector {
public:
    explicit RayVector(std::vector<double> p);

    /// Skips validation; only for formula checks at degenerate rays such as p = (1).
    [[nodiscard]] static RayVector unchecked(std::vector<double> p);

    [[nodiscard]] std::size_t m() const noexcept { return p_.size(); }
    [[nodiscard]] double operator[](std::size_t j) const { return p_.at(j); }
    [[nodiscard]] const std::vector<double>& values() const noexcept { return p_; }

private:
    struct NoCheck {};
    RayVector(std::vector<double> p, NoCheck) : p_(std::move(p)) {}
    std::vector<double> p_;
};

enum class InteractionKind { C1, C2 };

/// Symmetric 2m x 2m coupling matrix; rows 0..m-1 belong to Delta_1..Delta_m,
/// rows m..2m-1 to the copies of Delta_0.
struct InteractionMatrix {
    InteractionKind kind = InteractionKind::C1;
    Eigen::MatrixXd entries;

    [[nodiscard]] std::size_t size() const noexcept { return static_cast<std::size_t>(entries.rows()); }
    [[nodiscard]] std::size_t m() const noexcept { return size() / 2; }
    [[nodiscard]] double operator()(std::size_t j, std::size_t k) const
    {
        return entries(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
    }
};

/// Coupling for the linear problem: 2p_j^2 and p_j p_k on the Delta_j block,
/// -p_j(1 + p_j) between Delta_j and its Delta_0 copy, 2(1 + p_j)^2 on the
/// diagonal of the Delta_0 block.
[[nodiscard]] InteractionMatrix interaction_matrix_linear(const RayVector& p);

/// Same as the linear coupling except the Delta_0 block, which has diagonal
/// 2m(1 + p_j)^2/(m + 1) and off-diagonal -2(1 + p_j)(1 + p_k)/(m + 1).
[[nodiscard]] InteractionMatrix interaction_matrix_nonlinear(const RayVector& p);

struct MinorPair {
    double computed;
    double closed_form;

    [[nodiscard]] double relative_error() const;
};

/// All 2m leading principal minors, by LU and by the closed-form products
/// (p_1...p_j)^2 (j + 1) for j <= m, and [p_1...p_m (1 + p_1)...(1 + p_{j-m})]^2
/// times (m + 1) for C1 or (2m + 1 - j) for C2 when j > m.
[[nodiscard]] std::vector<MinorPair> principal_minors(const InteractionMatrix& C, const RayVector& p);

/// principal_minors, raising formula_regression when any pair differs by more
/// than 1e-9 relative.
std::vector<MinorPair> principal_minor_check(const InteractionMatrix& C, const RayVector& p);

/// Point masses on a strictly increasing grid.
struct DiscreteMeasure {
    std::vector<double> grid;
    std::vector<double> masses;
    double total = 1.0;

    /// Validates ordering, nonnegativity and the declared total (1e-12).
    void validate() const;
    [[nodiscard]] double mass() const;
    /// Cumulative mass of points <= x.
    [[nodiscard]] double cdf(double x) const;
    /// Points carrying more than (total / size) * 1e-3.
    [[nodiscard]] std::vector<bool> support_mask() const;
};

/// Interval partition used by the solver: grid_size Chebyshev points in
/// ascending order together with the half widths of their cells.
struct EquilibriumGrid {
    std::vector<double> points;
    std::vector<double> half_widths;
};

[[nodiscard]] EquilibriumGrid equilibrium_grid(const Interval& interval, std::size_t grid_size);

/// Masses of the arcsine law of the interval on the cells of equilibrium_grid.
[[nodiscard]] DiscreteMeasure arcsine_measure(const Interval& interval, std::size_t grid_size);

struct EquilibriumOptions {
    int max_iter = 200000;
    /// KKT evaluation period of the gradient phase.
    int check_every = 25;
    /// Finish with an active-set solve on the support found by the gradient phase.
    bool polish = true;
};

struct EquilibriumSolution {
    InteractionKind kind = InteractionKind::C1;
    std::vector<Interval> intervals;
    std::vector<DiscreteMeasure> components;
    std::vector<std::vector<double>> half_widths;
    /// omega_j = min over the grid of W_j.
    std::vector<double> constants;
    double kkt_violation = 0.0;
    double energy = 0.0;
    int iterations = 0;
    /// Energy of each accepted iterate, nonincreasing.
    std::vector<double> energy_trace;
};

/// [Delta_1, ..., Delta_m, Delta_0, ..., Delta_0].
[[nodiscard]] std::vector<Interval> equilibrium_intervals(const AngelescoSystem& system);

/// Minimizes sum_{j,k} c_{j,k} I(mu_j, mu_k) over unit-mass measures on the
/// Chebyshev grids of the intervals, diagonal kernel log(1/delta_i) with delta_i
/// the half cell width. Raises non_convergence with the per-component
/// violation profile when the KKT residual stays above tol.
[[nodiscard]] EquilibriumSolution solve_equilibrium(const InteractionMatrix& C, const std::vector<Interval>& intervals,
                                                    std::size_t grid_size, double tol,
                                                    const EquilibriumOptions& options = {});

/// Discrete energy sum_{j,k} c_{j,k} sum_{a,b} mu_j(a) mu_k(b) K(a, b) of
/// measures on the grids of `sol`.
[[nodiscard]] double discrete_energy(const EquilibriumSolution& sol, const InteractionMatrix& C,
                                     const std::vector<DiscreteMeasure>& measures);

/// W_j(z) = sum_k c_{j,k} V^{mu_k}(z); on a grid point of component k the
/// desingularized diagonal is used for that component.
[[nodiscard]] double combined_potential(const EquilibriumSolution& sol, const InteractionMatrix& C, std::size_t j,
                                        Complex z);

/// W_j at every grid point of component j.
[[nodiscard]] std::vector<double> combined_potential_on_grid(const EquilibriumSolution& sol,
                                                             const InteractionMatrix& C, std::size_t j);

/// exp((W_j(z) - omega_j) / p_j) for j < m; G_j for C1 solutions, H_j for C2.
[[nodiscard]] double rate_function(const EquilibriumSolution& sol, const InteractionMatrix& C, const RayVector& p,
                                   std::size_t j, Complex z);

/// sum_j int W_j d(mu_j - mubar_j) for a competitor on the solution grids;
/// nonnegative up to the KKT tolerance at a minimizer.
[[nodiscard]] double variational_gap(const EquilibriumSolution& sol, const InteractionMatrix& C,
                                     const std::vector<DiscreteMeasure>& competitor);

} // namespace fpade
