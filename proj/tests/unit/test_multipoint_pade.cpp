#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "fpade/error.hpp"
#include "fpade/measures.hpp"
#include "fpade/multipoint_pade.hpp"

using namespace fpade;

namespace {

AngelescoSystem single_branch()
{
    return AngelescoSystem(MeasureSpec::chebyshev(-1, 1, "sigma0"), {MeasureSpec::lebesgue(2, 3, "sigma1")});
}

std::vector<NodeSet> chebyshev_nodes(const AngelescoSystem& sys, const MultiIndex& n)
{
    std::vector<NodeSet> out;
    for (std::size_t j = 0; j < n.m(); ++j)
        out.push_back({chebyshev_points(sys.sigma0().interval(), static_cast<std::size_t>(n.node_count(j)))});
    return out;
}

} // namespace

TEST(MultiIndex, Basics)
{
    const MultiIndex n({3, 2});
    EXPECT_EQ(n.total(), 5);
    EXPECT_EQ(n.node_count(0), 8);
    EXPECT_EQ(n.node_count(1), 7);
    EXPECT_THROW(MultiIndex({-1, 2}), Error);
    EXPECT_THROW(MultiIndex(std::vector<int>{}), Error);
}

TEST(Multipoint, SingleBranchOracle)
{
    const auto sys = single_branch();
    const MultiIndex n({1});
    const double r = 1.0 / std::sqrt(2.0);
    const auto mp = solve_multipoint(sys, n, {NodeSet{{-r, r}}});
    ASSERT_EQ(mp.q_zeros.size(), 1u);
    ASSERT_EQ(mp.q_zeros[0].size(), 1u);
    EXPECT_NEAR(mp.q_zeros[0][0], 2.4265800225874501764, 1e-13);
}

TEST(Multipoint, InterpolatesAtTheNodes)
{
    const auto sys = reference_system();
    const MultiIndex n({3, 2});
    const auto mp = solve_multipoint(sys, n, chebyshev_nodes(sys, n));
    EXPECT_LT(mp.orto_total_residual, 1e-12);
    for (std::size_t j = 0; j < 2; ++j) {
        EXPECT_EQ(static_cast<int>(mp.q_zeros[j].size()), n[j]);
        for (double x : mp.q_zeros[j]) EXPECT_TRUE(sys.sigma(j).interval().contains_open(x));
        for (double x : mp.node_sets[j].nodes) {
            const Complex res = markov_transform(sys.sigma(j), Complex(x, 0.0)) -
                                numerator_at(mp, sys, j, x) / mp.q_at(Complex(x, 0.0));
            EXPECT_LT(std::abs(res), 1e-11);
        }
    }
}

TEST(Multipoint, RemainderIdentity)
{
    const auto sys = reference_system();
    const MultiIndex n({2, 3});
    const auto mp = solve_multipoint(sys, n, chebyshev_nodes(sys, n));
    for (std::size_t j = 0; j < 2; ++j) {
        for (Complex z : {Complex(0.0, 1.5), Complex(4.0, 0.0), Complex(-1.5, 0.2), Complex(0.3, 0.4)}) {
            const auto [direct, integral] = remainder_identity_residual(mp, sys, j, z);
            EXPECT_LT(std::abs(direct - integral), 1e-10 * std::abs(integral) + 1e-13) << j << " " << z;
            EXPECT_NEAR(log_abs_remainder(mp, sys, j, z), std::log(std::abs(integral)), 1e-9);
        }
    }
}

TEST(Multipoint, SplitDenominatorMultipliesBack)
{
    const auto sys = reference_system();
    const MultiIndex n({2, 2});
    const auto mp = solve_multipoint(sys, n, chebyshev_nodes(sys, n));
    const auto [qj, qt] = split_denominator(mp, sys, 0);
    const auto prod = qj * qt;
    for (double x : {-2.5, 0.0, 1.7}) EXPECT_NEAR(prod(x), mp.q(x), 1e-10 * (1 + std::abs(mp.q(x))));
}

TEST(Multipoint, EvaluationPointChecks)
{
    const auto sys = reference_system();
    const MultiIndex n({2, 2});
    const auto mp = solve_multipoint(sys, n, chebyshev_nodes(sys, n));
    try {
        check_evaluation_point(mp, sys, Complex(-2.5, 0.0));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::domain);
    }
    try {
        check_evaluation_point(mp, sys, Complex(mp.q_zeros[1][0], 1e-14));
        FAIL();
    } catch (const Error& e) {
        EXPECT_TRUE(e.kind() == ErrorKind::pole || e.kind() == ErrorKind::domain);
    }
    EXPECT_NO_THROW(check_evaluation_point(mp, sys, Complex(0.0, 2.0)));
}

TEST(Multipoint, WrongNodeCountRejected)
{
    const auto sys = reference_system();
    EXPECT_THROW((void)solve_multipoint(sys, MultiIndex({1, 1}), {NodeSet{{0.0}}, NodeSet{{-0.5, 0.5}}}), Error);
}
