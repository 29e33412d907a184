#include "fpade/linear_fp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "fpade/error.hpp"
#include "fpade/orthopoly.hpp"
#include "node_iteration.hpp"

namespace fpade {

namespace {

std::string fmt(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void check_branch(const AngelescoSystem& system, std::size_t j)
{
    if (j >= system.m())
        fail(ErrorKind::validation, "branch index " + std::to_string(j + 1) + " out of range 1.." +
                                        std::to_string(system.m()));
}

// |u| < 1 with u^k the decay rate of psi_k at the point of Delta_j nearest Delta_0.
double decay_ratio(const Interval& d0, const Interval& dj)
{
    const double t = dj.lo > d0.hi ? dj.lo : dj.hi;
    const double s = std::abs(d0.to_unit(t));
    return s - std::sqrt(s * s - 1.0);
}

} // namespace

int residual_order(const AngelescoSystem& system, const MultiIndex& n, std::size_t j)
{
    const Interval& d0 = system.sigma0().interval();
    double g = INFINITY;
    for (const auto& s : system.sigmas()) g = std::min(g, gap(d0, s.interval()));
    return std::max(96, 2 * analytic_order(d0, g, n.total() + n.node_count(j)));
}

double LinearFPApproximant::max_fourier_residual() const
{
    double r = 0.0;
    for (const auto& row : fourier_residuals)
        for (double v : row) r = std::max(r, v);
    return r;
}

FixedPointOptions linear_default_options()
{
    FixedPointOptions o;
    o.tol = 1e-12;
    return o;
}

std::vector<double> fourier_coefficients(const MeasureSpec& sigma0, const std::function<double(double)>& f,
                                         int k_max, int order, bool refine)
{
    if (k_max < 0) return {};
    const RecurrenceTable& rt = recurrence_coefficients(sigma0, k_max);
    auto eval = [&](int n, std::vector<double>& scale) {
        const Quadrature& q = gauss_quadrature(sigma0, n);
        std::vector<double> c(k_max + 1, 0.0), ell(k_max + 1);
        scale.assign(k_max + 1, 0.0);
        for (std::size_t i = 0; i < q.size(); ++i) {
            const double fx = q.weights[i] * f(q.nodes[i]);
            eval_orthonormal_all(rt, k_max, q.nodes[i], ell);
            for (int k = 0; k <= k_max; ++k) {
                c[k] += fx * ell[k];
                scale[k] += std::abs(fx * ell[k]);
            }
        }
        return c;
    };
    int n = std::max(order, k_max + 8);
    std::vector<double> scale;
    std::vector<double> prev = eval(n, scale);
    if (!refine) return prev;
    for (int it = 0; it < 8; ++it) {
        n *= 2;
        std::vector<double> cur = eval(n, scale);
        bool done = true;
        for (int k = 0; k <= k_max; ++k)
            if (std::abs(cur[k] - prev[k]) > 1e-12 * scale[k]) done = false;
        prev = std::move(cur);
        if (done) return prev;
    }
    fail(ErrorKind::numerical, "Fourier coefficients did not settle under quadrature refinement on " +
                                   sigma0.describe());
}

double fourier_coefficient(const AngelescoSystem& system, const PolynomialRep& Q, std::size_t j, int k)
{
    check_branch(system, j);
    if (k < 0) fail(ErrorKind::validation, "Fourier index must be nonnegative");
    const MeasureSpec& sj = system.sigma(j);
    const auto c = fourier_coefficients(
        system.sigma0(), [&](double x) { return Q(x) * markov_transform(sj, x); }, k,
        std::max(64, Q.degree() + k + 16));
    return c[k];
}

void check_zero_localization(const MultipointPade& mp, const AngelescoSystem& system)
{
    const MultiIndex& n = mp.n;
    if (mp.q.degree() != n.total() || !(n.total() == 0 || mp.q.is_monic(1e-8)))
        fail(ErrorKind::structural, "denominator has degree " + std::to_string(mp.q.degree()) +
                                        " or is not monic, expected monic of degree " + std::to_string(n.total()));
    std::vector<std::string> problems;
    for (std::size_t j = 0; j < system.m(); ++j) {
        const Interval& I = system.sigma(j).interval();
        const auto& z = mp.q_zeros[j];
        const auto inside = std::count_if(z.begin(), z.end(), [&](double r) { return I.contains_open(r); });
        if (static_cast<int>(z.size()) != n[j] || inside != n[j])
            problems.push_back("Delta_" + std::to_string(j + 1) + " holds " + std::to_string(inside) +
                               " zeros, expected " + std::to_string(n[j]));
        for (std::size_t i = 1; i < z.size(); ++i)
            if (!(z[i] - z[i - 1] > 1e-10 * I.length())) problems.push_back("zeros near " + fmt(z[i]) + " are not simple");
    }
    if (!problems.empty()) fail(ErrorKind::structural, "zero localization violated for " + n.str(), problems);
}

LinearFPApproximant solve_linear_fp(const AngelescoSystem& system, const MultiIndex& n,
                                    const FixedPointOptions& options)
{
    auto res = detail::iterate_nodes(system, n, detail::DensityKind::linear, options);
    LinearFPApproximant a;
    a.n = n;
    a.interpolant = std::move(res.mp);
    a.Q = a.interpolant.q;
    a.P = a.interpolant.p;
    a.trace = std::move(res.trace);
    check_zero_localization(a.interpolant, system);

    const int N0 = n.total();
    const MultipointPade& mp = a.interpolant;
    a.fourier_residuals.resize(system.m());
    a.fourier_relative.resize(system.m());
    for (std::size_t j = 0; j < system.m(); ++j) {
        if (n[j] == 0) continue;
        const int kmax = n.node_count(j) - 1;
        const Quadrature& inner = gauss_quadrature(system.sigma(j), mp.branch_orders[j]);
        auto markov = [&](double x) {
            double s = 0.0;
            for (std::size_t i = 0; i < inner.size(); ++i) s += inner.weights[i] / (x - inner.nodes[i]);
            return s;
        };
        const auto c = fourier_coefficients(
            system.sigma0(), [&](double x) { return mp.q_at(x) * markov(x) - a.P[j](x); }, kmax,
            residual_order(system, n, j), false);
        for (int k = N0; k <= kmax; ++k) a.fourier_residuals[j].push_back(std::abs(c[k]));

        // Same coefficients as -int Q psi_k dsigma_j, normalized by their absolute integrands.
        const Quadrature& qj = gauss_quadrature(system.sigma(j), mp.branch_orders[j] + kmax);
        std::vector<double> num(kmax + 1, 0.0), den(kmax + 1, 0.0);
        for (std::size_t i = 0; i < qj.size(); ++i) {
            const double t = qj.nodes[i];
            const auto psi = second_kind_functions(system.sigma0(), t, kmax);
            const double qt = qj.weights[i] * mp.q_at(t);
            for (int k = N0; k <= kmax; ++k) {
                num[k] += qt * psi[k];
                den[k] += std::abs(qt * psi[k]);
            }
        }
        for (int k = N0; k <= kmax; ++k) a.fourier_relative[j].push_back(std::abs(num[k]) / den[k]);
    }
    return a;
}

Complex remainder(const LinearFPApproximant& approx, const AngelescoSystem& system, std::size_t j, Complex z)
{
    check_branch(system, j);
    check_evaluation_point(approx.interpolant, system, z);
    return markov_transform(system.sigma(j), z, 64) -
           numerator_at(approx.interpolant, system, j, z) / approx.interpolant.q_at(z);
}

Complex remainder_integral(const LinearFPApproximant& approx, const AngelescoSystem& system, std::size_t j,
                           Complex z)
{
    check_branch(system, j);
    return remainder_integral(approx.interpolant, system, j, z);
}

std::vector<double> remainder_sign_changes(const LinearFPApproximant& approx, const AngelescoSystem& system,
                                           std::size_t j, SignChangeRoute route)
{
    check_branch(system, j);
    const int N = approx.n.node_count(j);
    if (N == 0) return {};
    const Interval& d0 = system.sigma0().interval();
    const auto samples = static_cast<std::size_t>(64 * N);
    const MultipointPade& mp = approx.interpolant;

    if (route == SignChangeRoute::integral) {
        const auto R = detail::scaled_remainder_on_base(system, mp, j);
        return detail::find_sign_changes([&](double x) { return mp.q_at(x) * R(x); }, d0, samples);
    }
    if (route == SignChangeRoute::direct) {
        const MeasureSpec& sj = system.sigma(j);
        const int order = mp.branch_orders[j];
        const PolynomialRep& P = approx.P[j];
        const bool trivial = approx.n.total() == 0;
        return detail::find_sign_changes(
            [&](double x) { return mp.q_at(x) * detail::markov_fixed(sj, order, x) - (trivial ? 0.0 : P(x)); }, d0,
            samples);
    }

    const Interval& dj = system.sigma(j).interval();
    const double u = decay_ratio(d0, dj);
    const int kmax = N + static_cast<int>(std::ceil(std::log(1e-20) / std::log(u))) + 10;
    const Quadrature& qj =
        gauss_quadrature(system.sigma(j), analytic_order(dj, gap(d0, dj), approx.n.total() + kmax) + 16);
    std::vector<double> c(kmax + 1, 0.0);
    for (std::size_t i = 0; i < qj.size(); ++i) {
        const double t = qj.nodes[i];
        const auto psi = second_kind_functions(system.sigma0(), t, kmax);
        const double qt = qj.weights[i] * mp.q_at(t);
        for (int k = N; k <= kmax; ++k) c[k] -= qt * psi[k];
    }
    const RecurrenceTable& rt = recurrence_coefficients(system.sigma0(), kmax);
    return detail::find_sign_changes([&](double x) { return orthonormal_series(rt, c, x); }, d0, samples);
}

PolynomialRep sign_change_polynomial(const LinearFPApproximant& approx, const AngelescoSystem& system,
                                     std::size_t j, SignChangeRoute route)
{
    const auto zeros = remainder_sign_changes(approx, system, j, route);
    const int N = approx.n.node_count(j);
    if (static_cast<int>(zeros.size()) != N)
        fail(ErrorKind::structural, "remainder of branch " + std::to_string(j + 1) + " for " + approx.n.str() +
                                        " changes sign " + std::to_string(zeros.size()) + " times on Delta_0, expected " +
                                        std::to_string(N));
    return PolynomialRep::from_roots(zeros, system.sigma0().interval());
}

} // namespace fpade
