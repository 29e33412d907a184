#pragma once

#include <string>
#include <vector>

#include "fpade/equilibrium.hpp"
#include "fpade/fixed_point.hpp"
#include "fpade/measures.hpp"
#include "fpade/multipoint_pade.hpp"
#include "fpade/polynomial.hpp"

namespace fpade {

/// Multi-indices along a ray: n_j = round(p_j |n|) with a largest-remainder
/// correction so that the entries sum to |n|.
class RaySchedule {
public:
    RaySchedule(RayVector p, std::vector<int> sizes);

    [[nodiscard]] const RayVector& ray() const noexcept { return p_; }
    [[nodiscard]] const std::vector<int>& sizes() const noexcept { return sizes_; }
    [[nodiscard]] std::size_t size() const noexcept { return sizes_.size(); }
    [[nodiscard]] MultiIndex multi_index(std::size_t i) const { return round_ray(p_, sizes_.at(i)); }
    /// max over the schedule and j of |n_j / |n| - p_j|.
    [[nodiscard]] double max_deviation() const;

    [[nodiscard]] static MultiIndex round_ray(const RayVector& p, int size);

private:
    RayVector p_;
    std::vector<int> sizes_;
};

enum class ApproximantKind { linear, nonlinear };

[[nodiscard]] const char* to_string(ApproximantKind kind) noexcept;

/// Mass 1/deg at each zero; a zero off the real line raises a structural error.
[[nodiscard]] DiscreteMeasure zero_counting_measure(const PolynomialRep& poly);
/// Same measure from zeros already known to be real.
[[nodiscard]] DiscreteMeasure zero_counting_measure(std::vector<double> zeros);

/// Kolmogorov distance sup_x |F_a(x) - F_b(x)|, checked over both sides of
/// every atom. Raises validation when the total masses differ by more than 1e-9.
[[nodiscard]] double cdf_distance(const DiscreteMeasure& a, const DiscreteMeasure& b);

/// Runs the linear or non-linear solver for n and returns its factored form.
[[nodiscard]] MultipointPade solve_kind(const AngelescoSystem& system, const MultiIndex& n, ApproximantKind kind,
                                        const FixedPointOptions* options = nullptr);

struct ZeroDistributionRow {
    int size = 0;
    MultiIndex n{std::vector<int>{0}};
    /// cdf distance of the zeros of q_{n,j} to component j, per branch.
    std::vector<double> q_distance;
    /// cdf distance of the node set W_{n,j} to component m + j, per branch.
    std::vector<double> w_distance;
};

struct ZeroDistributionReport {
    ApproximantKind kind = ApproximantKind::linear;
    std::vector<ZeroDistributionRow> rows;

    /// Every tracked distance is smaller at the last size than at the first.
    [[nodiscard]] bool decreasing() const;
    /// Largest distance at the last size.
    [[nodiscard]] double final_max() const;
};

/// Zero counting measures along the schedule against an equilibrium solution
/// of the matching kind (C1 for linear, C2 for non-linear). Branches with
/// n_j = 0 at a size are reported as NaN.
[[nodiscard]] ZeroDistributionReport zero_distribution_experiment(const AngelescoSystem& system,
                                                                  const RaySchedule& schedule, ApproximantKind kind,
                                                                  const EquilibriumSolution& equilibrium,
                                                                  const FixedPointOptions* options = nullptr);

/// (int |q_{n,j}|^2 |q~_{n,j}| / |w_{n,j}| dsigma_j)^(1/|n|), the normalized
/// extremal constant of branch j (gamma for linear nodes, zeta for non-linear).
[[nodiscard]] double extremal_constant_root(const MultipointPade& mp, const AngelescoSystem& system, std::size_t j);

struct RateRow {
    std::size_t j = 0;
    Complex z;
    int size = 0;
    double err = 0.0;
    double log_err = 0.0;
    double emp_rate = 0.0;
    double theo_rate = 0.0;
};

struct RateFit {
    std::size_t j = 0;
    Complex z;
    /// exp of the slope of log err against |n| over the top half of the schedule.
    double fitted = 0.0;
    double theo = 0.0;
    double relative_deviation = 0.0;
    /// Sizes used by the fit (fewer than the top half when truncated).
    int sizes_used = 0;
    /// Set when err dropped below 1e-300 and the schedule was cut there.
    bool truncated = false;
};

struct ExtremalRow {
    std::size_t j = 0;
    int size = 0;
    double value = 0.0;
    /// exp(-omega_j / p_j).
    double target = 0.0;
};

struct RateReport {
    ApproximantKind kind = ApproximantKind::linear;
    std::vector<RateRow> rows;
    std::vector<RateFit> fits;
    std::vector<ExtremalRow> extremal;
    /// Per branch: |value - target| nonincreasing over the top half of the schedule.
    std::vector<bool> extremal_monotone;
    /// Test points with theo_rate > 1 (divergence region), as (j, z).
    std::vector<std::pair<std::size_t, Complex>> divergence_points;
    std::string note;

    [[nodiscard]] double max_relative_deviation() const;
};

/// Error rates |sigma_j(z) - P_j/Q|^(1/|n|) along the schedule against
/// exp((W_j(z) - omega_j)/p_j). Test points must keep a distance > 0.1 from
/// every interval. Schedule entries are solved concurrently; rows are sorted
/// by (j, z, size).
[[nodiscard]] RateReport rate_experiment(const AngelescoSystem& system, const RaySchedule& schedule,
                                         ApproximantKind kind, const std::vector<Complex>& test_points,
                                         const EquilibriumSolution& equilibrium, const InteractionMatrix& C,
                                         const FixedPointOptions* options = nullptr);

} // namespace fpade
