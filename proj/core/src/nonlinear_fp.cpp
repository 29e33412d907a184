#include "fpade/nonlinear_fp.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "fpade/error.hpp"
#include "fpade/linear_fp.hpp"
#include "fpade/orthopoly.hpp"
#include "node_iteration.hpp"

namespace fpade {

namespace {

void check_branch(const AngelescoSystem& system, std::size_t j)
{
    if (j >= system.m())
        fail(ErrorKind::validation, "branch index " + std::to_string(j + 1) + " out of range 1.." +
                                        std::to_string(system.m()));
}

int pick_base_order(const AngelescoSystem& system, const MultiIndex& n, std::size_t j, int base_order)
{
    return base_order > 0 ? base_order : detail::default_base_order(system, n, j);
}

NonlinearFPApproximant wrap(MultipointPade mp, const MultiIndex& n)
{
    NonlinearFPApproximant a;
    a.n = n;
    a.T = mp.q;
    a.S = mp.p;
    a.interpolant = std::move(mp);
    return a;
}

} // namespace

std::vector<double> omega_zeros(const MultipointPade& mp, const AngelescoSystem& system, std::size_t j,
                                int base_order)
{
    check_branch(system, j);
    const int order = pick_base_order(system, mp.n, j, base_order);
    const Quadrature& base = gauss_quadrature(system.sigma0(), order);
    const auto rho = detail::branch_density(system, mp, j, detail::DensityKind::nonlinear, base);
    for (std::size_t i = 1; i < rho.sign.size(); ++i)
        if (rho.sign[i] != rho.sign[0])
            fail(ErrorKind::structural, "node density of branch " + std::to_string(j + 1) +
                                            " changes sign on Delta_0 near " + std::to_string(base.nodes[i]));
    const double mx = *std::max_element(rho.log_abs.begin(), rho.log_abs.end());
    std::vector<double> w(base.size());
    for (std::size_t i = 0; i < base.size(); ++i) w[i] = std::exp(rho.log_abs[i] - mx);
    return varying_orthogonal_zeros(base, w, mp.n.node_count(j));
}

PolynomialRep omega_polynomial(const MultipointPade& mp, const AngelescoSystem& system, std::size_t j,
                               int base_order)
{
    return PolynomialRep::from_roots(omega_zeros(mp, system, j, base_order), system.sigma0().interval());
}

std::vector<double> omega_density(const MultipointPade& mp, const AngelescoSystem& system, std::size_t j,
                                  const std::vector<double>& points)
{
    check_branch(system, j);
    Quadrature pts{system.sigma0().interval(), points, std::vector<double>(points.size(), 1.0)};
    const auto rho = detail::branch_density(system, mp, j, detail::DensityKind::nonlinear, pts);
    std::vector<double> out(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) out[i] = std::exp(rho.log_abs[i]);
    return out;
}

NonlinearFPApproximant fixed_point_solve(const AngelescoSystem& system, const MultiIndex& n,
                                         const FixedPointOptions& options, const std::vector<NodeSet>* start)
{
    auto res = detail::iterate_nodes(system, n, detail::DensityKind::nonlinear, options, start);
    NonlinearFPApproximant a = wrap(std::move(res.mp), n);
    a.start = std::move(res.start);
    a.trace = std::move(res.trace);
    a.base_orders = std::move(res.base_orders);
    return a;
}

NonlinearFPApproximant nonlinear_candidate(const AngelescoSystem& system, const MultiIndex& n,
                                           const std::vector<NodeSet>& nodes)
{
    NonlinearFPApproximant a = wrap(solve_multipoint(system, n, nodes), n);
    a.start = nodes;
    for (std::size_t j = 0; j < system.m(); ++j) a.base_orders.push_back(detail::default_base_order(system, n, j));
    return a;
}

double residual_check(const NonlinearFPApproximant& approx, const AngelescoSystem& system)
{
    const MultipointPade& mp = approx.interpolant;
    double worst = 0.0;
    for (std::size_t j = 0; j < system.m(); ++j) {
        const int kmax = approx.n.node_count(j) - 1;
        if (kmax < 0) continue;
        const Quadrature& inner = gauss_quadrature(system.sigma(j), mp.branch_orders[j]);
        auto f = [&](double x) {
            double s = 0.0;
            for (std::size_t i = 0; i < inner.size(); ++i) s += inner.weights[i] / (x - inner.nodes[i]);
            const double sx = approx.n.total() == 0 ? 0.0 : approx.S[j](x);
            return s - sx / mp.q_at(x);
        };
        const auto c = fourier_coefficients(system.sigma0(), f, kmax, residual_order(system, approx.n, j), false);
        for (double v : c) worst = std::max(worst, std::abs(v));
    }
    return worst;
}

double self_consistency(const NonlinearFPApproximant& approx, const AngelescoSystem& system)
{
    double worst = 0.0;
    for (std::size_t j = 0; j < system.m(); ++j) {
        if (approx.n.node_count(j) == 0) continue;
        const int order = j < approx.base_orders.size() ? approx.base_orders[j] : 0;
        const auto z = omega_zeros(approx.interpolant, system, j, order);
        const auto& x = approx.interpolant.node_sets[j].nodes;
        for (std::size_t i = 0; i < z.size(); ++i) worst = std::max(worst, std::abs(z[i] - x[i]));
    }
    return worst;
}

Complex remainder(const NonlinearFPApproximant& approx, const AngelescoSystem& system, std::size_t j, Complex z)
{
    check_branch(system, j);
    check_evaluation_point(approx.interpolant, system, z);
    return markov_transform(system.sigma(j), z, 64) -
           numerator_at(approx.interpolant, system, j, z) / approx.interpolant.q_at(z);
}

std::vector<double> remainder_sign_changes(const NonlinearFPApproximant& approx, const AngelescoSystem& system,
                                           std::size_t j, RemainderForm form)
{
    check_branch(system, j);
    const int N = approx.n.node_count(j);
    if (N == 0) return {};
    const MultipointPade& mp = approx.interpolant;
    const auto samples = static_cast<std::size_t>(64 * N);
    if (form == RemainderForm::direct) {
        const MeasureSpec& sj = system.sigma(j);
        const int order = mp.branch_orders[j];
        const PolynomialRep& S = approx.S[j];
        const bool trivial = approx.n.total() == 0;
        return detail::find_sign_changes(
            [&](double x) { return detail::markov_fixed(sj, order, x) - (trivial ? 0.0 : S(x) / mp.q_at(x)); },
            system.sigma0().interval(), samples);
    }
    const auto R = detail::scaled_remainder_on_base(system, mp, j);
    return detail::find_sign_changes(R, system.sigma0().interval(), samples);
}

} // namespace fpade
