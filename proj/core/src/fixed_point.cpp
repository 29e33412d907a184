#include "node_iteration.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "fpade/error.hpp"
#include "fpade/orthopoly.hpp"

namespace fpade::detail {

namespace {

std::string fmt(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

} // namespace

int default_base_order(const AngelescoSystem& system, const MultiIndex& n, std::size_t j)
{
    const Interval& d0 = system.sigma0().interval();
    double g = INFINITY;
    for (const auto& s : system.sigmas()) g = std::min(g, gap(d0, s.interval()));
    const int nodes = n.node_count(j);
    return std::max(64, analytic_order(d0, g, 2 * nodes) + nodes + 16);
}

BranchDensity branch_density(const AngelescoSystem& system, const MultipointPade& mp, std::size_t j,
                             DensityKind kind, const Quadrature& base)
{
    const Quadrature& inner = gauss_quadrature(system.sigma(j), mp.branch_orders[j]);
    const auto& wn = mp.node_sets[j].nodes;
    std::vector<double> g(inner.size()), sg(inner.size());
    for (std::size_t i = 0; i < inner.size(); ++i) {
        const double x = inner.nodes[i];
        g[i] = std::log(inner.weights[i]) + 2.0 * log_root_product<double>(mp.q_zeros[j], x) +
               mp.log_abs_cofactor(j, x) - log_root_product<double>(wn, x);
        sg[i] = (mp.q_cofactor(j, x) < 0) != (mp.w_at(j, x) < 0) ? -1.0 : 1.0;
    }
    const double gmax = *std::max_element(g.begin(), g.end());
    std::vector<double> e(inner.size());
    for (std::size_t i = 0; i < inner.size(); ++i) e[i] = std::exp(g[i] - gmax);

    BranchDensity out;
    out.log_abs.resize(base.size());
    out.sign.resize(base.size());
    for (std::size_t k = 0; k < base.size(); ++k) {
        const double y = base.nodes[k];
        double a = 0.0, s = 0.0;
        for (std::size_t i = 0; i < inner.size(); ++i) {
            const double d = y - inner.nodes[i];
            a += e[i] / std::abs(d);
            s += sg[i] * e[i] / d;
        }
        const double lqj = log_root_product<double>(mp.q_zeros[j], y);
        if (kind == DensityKind::linear) {
            out.log_abs[k] = std::log(a) + gmax - lqj;
            out.sign[k] = (s < 0) != (mp.q_branch(j, y) < 0) ? -1.0 : 1.0;
        } else {
            out.log_abs[k] = std::log(a) + gmax - 2.0 * lqj - mp.log_abs_cofactor(j, y);
            out.sign[k] = (s < 0) != (mp.q_cofactor(j, y) < 0) ? -1.0 : 1.0;
        }
    }
    return out;
}

std::vector<double> mapped_nodes(const AngelescoSystem& system, const MultipointPade& mp, std::size_t j,
                                 DensityKind kind, int base_order)
{
    const Quadrature& base = gauss_quadrature(system.sigma0(), base_order);
    const BranchDensity rho = branch_density(system, mp, j, kind, base);
    const double mx = *std::max_element(rho.log_abs.begin(), rho.log_abs.end());
    std::vector<double> w(base.size());
    for (std::size_t i = 0; i < base.size(); ++i) w[i] = std::exp(rho.log_abs[i] - mx);
    return varying_orthogonal_zeros(base, w, mp.n.node_count(j));
}

std::vector<NodeSet> canonical_start(const AngelescoSystem& system, const MultiIndex& n)
{
    std::vector<NodeSet> out(system.m());
    for (std::size_t j = 0; j < system.m(); ++j) {
        const int N = n.node_count(j);
        if (N > 0) out[j].nodes = gauss_quadrature(system.sigma0(), N).nodes;
    }
    return out;
}

std::vector<double> find_sign_changes(const std::function<double(double)>& f, const Interval& interval,
                                     std::size_t samples)
{
    const auto xs = chebyshev_points(interval, samples);
    std::vector<double> zeros;
    double xa = xs[0], fa = f(xa);
    for (std::size_t i = 1; i < xs.size(); ++i) {
        const double xb = xs[i], fb = f(xb);
        if (fb == 0.0) continue;
        if (fa != 0.0 && (fa < 0) != (fb < 0)) {
            double a = xa, b = xb, fl = fa;
            while (b - a > 1e-13) {
                const double c = 0.5 * (a + b);
                const double fc = f(c);
                if (fc == 0.0) {
                    a = b = c;
                    break;
                }
                if ((fc < 0) == (fl < 0)) {
                    a = c;
                    fl = fc;
                } else {
                    b = c;
                }
            }
            zeros.push_back(0.5 * (a + b));
        }
        xa = xb;
        fa = fb;
    }
    return zeros;
}

std::function<double(double)> scaled_remainder_on_base(const AngelescoSystem& system, const MultipointPade& mp,
                                                      std::size_t j)
{
    const Quadrature& inner = gauss_quadrature(system.sigma(j), mp.branch_orders[j]);
    std::vector<double> g(inner.size()), sg(inner.size());
    for (std::size_t i = 0; i < inner.size(); ++i) {
        const double t = inner.nodes[i];
        g[i] = std::log(inner.weights[i]) + 2.0 * log_root_product<double>(mp.q_zeros[j], t) +
               mp.log_abs_cofactor(j, t) - log_root_product<double>(mp.node_sets[j].nodes, t);
        sg[i] = (mp.q_cofactor(j, t) < 0) != (mp.w_at(j, t) < 0) ? -1.0 : 1.0;
    }
    const double gmax = *std::max_element(g.begin(), g.end());
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = sg[i] * std::exp(g[i] - gmax);
    std::vector<double> nodes = inner.nodes;
    return [&mp, j, g = std::move(g), nodes = std::move(nodes)](double x) {
        double s = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) s += g[i] / (x - nodes[i]);
        const double lw = log_root_product<double>(mp.node_sets[j].nodes, x) -
                          2.0 * log_root_product<double>(mp.q_zeros[j], x) - mp.log_abs_cofactor(j, x);
        const double sign = (mp.w_at(j, x) < 0) != (mp.q_cofactor(j, x) < 0) ? -1.0 : 1.0;
        return sign * s * std::exp(std::clamp(lw, -700.0, 700.0));
    };
}

double markov_fixed(const MeasureSpec& spec, int order, double x)
{
    const Quadrature& q = gauss_quadrature(spec, order);
    double s = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) s += q.weights[i] / (x - q.nodes[i]);
    return s;
}

NodeIterationResult iterate_nodes(const AngelescoSystem& system, const MultiIndex& n, DensityKind kind,
                                  const FixedPointOptions& options, const std::vector<NodeSet>* start)
{
    if (!(options.damping > 0.0 && options.damping <= 1.0))
        fail(ErrorKind::validation, "damping must lie in (0, 1], got " + fmt(options.damping));
    if (options.max_iter < 1) fail(ErrorKind::validation, "max_iter must be at least 1");
    if (!(options.tol > 0.0)) fail(ErrorKind::validation, "tolerance must be positive");
    if (n.m() != system.m())
        fail(ErrorKind::validation, "multi-index " + n.str() + " does not match a system with " +
                                        std::to_string(system.m()) + " measures");
    if (n.total() > kMaxTotalDegree)
        fail(ErrorKind::validation, "|n| = " + std::to_string(n.total()) + " exceeds the supported ceiling of " +
                                        std::to_string(kMaxTotalDegree));

    const std::size_t m = system.m();
    NodeIterationResult res;
    res.start = start ? *start : canonical_start(system, n);
    res.base_orders.resize(m);
    for (std::size_t j = 0; j < m; ++j)
        res.base_orders[j] = options.base_order > 0 ? options.base_order : default_base_order(system, n, j);

    MultipointOptions mopt;
    mopt.branch_order = options.branch_order;
    std::vector<NodeSet> X = res.start;
    MultipointPade mp = solve_multipoint(system, n, X, mopt);
    if (n.total() == 0) {
        res.mp = std::move(mp);
        return res;
    }

    double damping = options.damping;
    int rising = 0;
    double prev = INFINITY;
    for (int it = 1; it <= options.max_iter; ++it) {
        double disp = 0.0;
        std::vector<std::vector<double>> Y(m);
        for (std::size_t j = 0; j < m; ++j) {
            Y[j] = mapped_nodes(system, mp, j, kind, res.base_orders[j]);
            for (std::size_t i = 0; i < Y[j].size(); ++i) disp = std::max(disp, std::abs(Y[j][i] - X[j].nodes[i]));
        }
        res.trace.push_back({it, disp, damping});
        if (disp < options.tol) {
            res.mp = std::move(mp);
            return res;
        }
        rising = disp > prev ? rising + 1 : 0;
        prev = disp;
        if (rising >= 3) {
            damping *= 0.5;
            rising = 0;
        }
        for (std::size_t j = 0; j < m; ++j) {
            for (std::size_t i = 0; i < Y[j].size(); ++i) X[j].nodes[i] += damping * (Y[j][i] - X[j].nodes[i]);
            std::sort(X[j].nodes.begin(), X[j].nodes.end());
        }
        mopt.initial_zeros = mp.q_zeros;
        mp = solve_multipoint(system, n, X, mopt);
    }

    std::vector<double> trace;
    for (const auto& r : res.trace) trace.push_back(r.displacement);
    const std::string message = "node iteration for " + n.str() + " did not reach displacement " +
                                fmt(options.tol) + " in " + std::to_string(options.max_iter) + " iterations (last " +
                                fmt(trace.back()) + ")";
    fail(ErrorKind::non_convergence, message, {}, std::move(trace));
}

} // namespace fpade::detail
