#include <cmath>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "fpade/asymptotics.hpp"
#include "fpade/error.hpp"

using namespace fpade;

namespace {

const EquilibriumSolution& linear_equilibrium()
{
    static const EquilibriumSolution sol = solve_equilibrium(interaction_matrix_linear(RayVector({0.5, 0.5})),
                                                             equilibrium_intervals(reference_system()), 200, 1e-6);
    return sol;
}

DiscreteMeasure atoms(std::vector<double> x)
{
    return zero_counting_measure(std::move(x));
}

} // namespace

TEST(RaySchedule, RoundingKeepsTotals)
{
    for (const std::vector<double>& p : {std::vector<double>{0.5, 0.5}, {1.0 / 3, 2.0 / 3}, {0.2, 0.3, 0.5}})
        for (int size = 1; size <= 30; ++size) {
            const auto n = RaySchedule::round_ray(RayVector(p), size);
            EXPECT_EQ(n.total(), size);
            for (std::size_t j = 0; j < p.size(); ++j) EXPECT_LT(std::abs(n[j] - p[j] * size), 1.0);
        }
    EXPECT_EQ(RaySchedule::round_ray(RayVector({0.5, 0.5}), 5).values(), (std::vector<int>{3, 2}));
}

TEST(RaySchedule, Validation)
{
    const RayVector p({0.5, 0.5});
    EXPECT_THROW(RaySchedule(p, {4, 4}), Error);
    EXPECT_THROW(RaySchedule(p, {0, 4}), Error);
    EXPECT_THROW(RaySchedule(p, {4, 60}), Error);
    const RaySchedule s(p, {4, 8, 12});
    EXPECT_EQ(s.size(), 3u);
    EXPECT_EQ(s.multi_index(1).values(), (std::vector<int>{4, 4}));
    EXPECT_DOUBLE_EQ(s.max_deviation(), 0.0);
}

TEST(ZeroCounting, ChebyshevAndProductPolynomials)
{
    const auto t2 = zero_counting_measure(PolynomialRep(Interval(-1, 1), {0.0, 0.0, 1.0}));
    ASSERT_EQ(t2.grid.size(), 2u);
    EXPECT_NEAR(t2.grid[0], -std::sqrt(0.5), 1e-15);
    EXPECT_NEAR(t2.grid[1], std::sqrt(0.5), 1e-15);
    EXPECT_DOUBLE_EQ(t2.masses[0], 0.5);
    const auto q = zero_counting_measure(PolynomialRep::from_monomial(std::vector<double>{6, -5, 1}, Interval(0, 4)));
    EXPECT_NEAR(q.grid[0], 2.0, 1e-14);
    EXPECT_NEAR(q.grid[1], 3.0, 1e-14);
    const auto merged = atoms({1.0, 1.0, 2.0});
    ASSERT_EQ(merged.grid.size(), 2u);
    EXPECT_NEAR(merged.masses[0], 2.0 / 3.0, 1e-15);
}

TEST(CdfDistance, MetricProperties)
{
    const auto a = atoms({0.0, 1.0});
    const auto b = atoms({0.5, 1.5});
    const auto c = atoms({-1.0, 0.2, 0.9, 3.0});
    EXPECT_DOUBLE_EQ(cdf_distance(a, a), 0.0);
    EXPECT_DOUBLE_EQ(cdf_distance(a, b), 0.5);
    EXPECT_DOUBLE_EQ(cdf_distance(a, b), cdf_distance(b, a));
    EXPECT_LE(cdf_distance(a, c), cdf_distance(a, b) + cdf_distance(b, c) + 1e-15);
    DiscreteMeasure heavy = a;
    heavy.total = 2.0;
    for (auto& w : heavy.masses) w *= 2.0;
    EXPECT_THROW((void)cdf_distance(a, heavy), Error);
}

TEST(CdfDistance, ArcsineDiscretizationsAgree)
{
    const Interval I(-1, 1);
    EXPECT_LT(cdf_distance(arcsine_measure(I, 400), arcsine_measure(I, 800)), 5e-3);
}

TEST(Experiments, LinearZerosStayInTheirIntervals)
{
    const auto sys = reference_system();
    const auto mp = solve_kind(sys, MultiIndex({6, 6}), ApproximantKind::linear);
    ASSERT_EQ(mp.q_zeros[0].size(), 6u);
    for (double x : mp.q_zeros[0]) {
        EXPECT_GT(x, -3.0);
        EXPECT_LT(x, -2.0);
    }
}

TEST(Experiments, ZeroDistributionIsMirrorSymmetric)
{
    const auto sys = reference_system();
    const RaySchedule s(RayVector({0.5, 0.5}), {4, 8, 12});
    const auto rep = zero_distribution_experiment(sys, s, ApproximantKind::linear, linear_equilibrium());
    ASSERT_EQ(rep.rows.size(), 3u);
    for (const auto& row : rep.rows) {
        EXPECT_NEAR(row.q_distance[0], row.q_distance[1], 1e-6);
        EXPECT_NEAR(row.w_distance[0], row.w_distance[1], 1e-6);
    }
    EXPECT_TRUE(rep.decreasing());
    EXPECT_LT(rep.final_max(), rep.rows.front().q_distance[0]);
}

TEST(Experiments, KindMismatchRejected)
{
    const RaySchedule s(RayVector({0.5, 0.5}), {4});
    EXPECT_THROW((void)zero_distribution_experiment(reference_system(), s, ApproximantKind::nonlinear,
                                                    linear_equilibrium()),
                 Error);
}

TEST(Experiments, SmallRateRun)
{
    const auto sys = reference_system();
    const RaySchedule s(RayVector({0.5, 0.5}), {4, 6, 8, 10});
    const auto C = interaction_matrix_linear(RayVector({0.5, 0.5}));
    const std::vector<Complex> pts = {Complex(0.0, 4.0), Complex(5.0, 0.0)};
    const auto rep = rate_experiment(sys, s, ApproximantKind::linear, pts, linear_equilibrium(), C);
    EXPECT_EQ(rep.rows.size(), 2u * pts.size() * s.size());
    ASSERT_EQ(rep.fits.size(), 4u);
    for (const auto& f : rep.fits) {
        EXPECT_GT(f.fitted, 0.0);
        EXPECT_LT(f.fitted, 1.0);
        EXPECT_LT(f.relative_deviation, 0.25);
    }
    EXPECT_EQ(rep.extremal_monotone.size(), 2u);
    EXPECT_THROW((void)rate_experiment(sys, s, ApproximantKind::linear, {Complex(0.0, 0.05)}, linear_equilibrium(), C),
                 Error);
}

TEST(Experiments, ExtremalConstantMatchesDirectQuadrature)
{
    const auto sys = reference_system();
    const auto mp = solve_kind(sys, MultiIndex({2, 2}), ApproximantKind::nonlinear);
    const Quadrature& q = gauss_quadrature(sys.sigma(0), 80);
    const double integral = q.integrate([&](double x) {
        const double qj = mp.q_branch(0, x);
        return qj * qj * std::abs(mp.q_cofactor(0, x)) / std::abs(mp.w_at(0, x));
    });
    EXPECT_NEAR(extremal_constant_root(mp, sys, 0), std::pow(integral, 0.25), 1e-12);
}
