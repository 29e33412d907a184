#include "fpade/multipoint_pade.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "fpade/error.hpp"
#include "fpade/orthopoly.hpp"

namespace fpade {

namespace {

std::string fmt(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Complex logarithm of prod (z - r_i); the imaginary part is the summed argument.
Complex log_product(std::span<const double> roots, Complex z)
{
    Complex s = 0.0;
    for (double r : roots) s += std::log(z - r);
    return s;
}

void validate_inputs(const AngelescoSystem& system, const MultiIndex& n, const std::vector<NodeSet>& node_sets)
{
    if (n.m() != system.m())
        fail(ErrorKind::validation, "multi-index " + n.str() + " has " + std::to_string(n.m()) +
                                        " entries but the system has " + std::to_string(system.m()) + " measures");
    if (n.total() > kMaxTotalDegree)
        fail(ErrorKind::validation, "|n| = " + std::to_string(n.total()) + " exceeds the supported ceiling of " +
                                        std::to_string(kMaxTotalDegree));
    if (node_sets.size() != system.m())
        fail(ErrorKind::validation, "expected " + std::to_string(system.m()) + " node sets, got " +
                                        std::to_string(node_sets.size()));
    const Interval& d0 = system.sigma0().interval();
    std::vector<std::string> problems;
    for (std::size_t j = 0; j < system.m(); ++j) {
        const auto& x = node_sets[j].nodes;
        const std::string tag = "node set " + std::to_string(j + 1);
        if (static_cast<int>(x.size()) != n.node_count(j))
            problems.push_back(tag + " has " + std::to_string(x.size()) + " nodes, expected " +
                               std::to_string(n.node_count(j)));
        for (double v : x)
            if (!std::isfinite(v) || !d0.contains(v)) {
                problems.push_back(tag + " has node " + fmt(v) + " outside Delta_0");
                break;
            }
    }
    if (!problems.empty()) fail(ErrorKind::validation, "invalid interpolation nodes", problems);
}

// Log of the varying weight |q~_j(t)| / |w_j(t)| at the nodes of the branch rule.
std::vector<double> log_varying_weight(const MultipointPade& mp, std::size_t j, const Quadrature& quad)
{
    std::vector<double> lw(quad.size());
    for (std::size_t i = 0; i < quad.size(); ++i) {
        const double t = quad.nodes[i];
        lw[i] = mp.log_abs_cofactor(j, t) - log_root_product<double>(mp.node_sets[j].nodes, t);
    }
    return lw;
}

std::vector<double> normalized_exp(const std::vector<double>& logs)
{
    const double mx = *std::max_element(logs.begin(), logs.end());
    std::vector<double> out(logs.size());
    for (std::size_t i = 0; i < logs.size(); ++i) out[i] = std::exp(logs[i] - mx);
    return out;
}

double orto_residual(const MultipointPade& mp, const AngelescoSystem& system, std::size_t j, int order)
{
    const int nj = mp.n[j];
    if (nj == 0) return 0.0;
    const Quadrature& quad = gauss_quadrature(system.sigma(j), order);
    const Interval& I = quad.interval;
    std::vector<double> lg(quad.size()), sg(quad.size());
    for (std::size_t i = 0; i < quad.size(); ++i) {
        const double t = quad.nodes[i];
        const double qv = mp.q_at(t), wv = mp.w_at(j, t);
        lg[i] = log_root_product<double>(mp.q_zeros[j], t) + mp.log_abs_cofactor(j, t) -
                log_root_product<double>(mp.node_sets[j].nodes, t);
        sg[i] = (qv < 0) != (wv < 0) ? -1.0 : 1.0;
    }
    const auto mag = normalized_exp(lg);
    double worst = 0.0;
    for (int k = 0; k < nj; ++k) {
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < quad.size(); ++i) {
            const double tk = std::cos(k * std::acos(std::clamp(I.to_unit(quad.nodes[i]), -1.0, 1.0)));
            const double v = quad.weights[i] * tk * sg[i] * mag[i];
            num += v;
            den += std::abs(v);
        }
        if (den > 0.0) worst = std::max(worst, std::abs(num) / den);
    }
    return worst;
}

} // namespace

MultiIndex::MultiIndex(std::vector<int> n) : n_(std::move(n))
{
    if (n_.empty()) fail(ErrorKind::validation, "multi-index must have at least one entry");
    for (int v : n_) {
        if (v < 0) fail(ErrorKind::validation, "multi-index entries must be nonnegative, got " + std::to_string(v));
        total_ += v;
    }
}

std::string MultiIndex::str() const
{
    std::string s = "(";
    for (std::size_t j = 0; j < n_.size(); ++j) s += (j ? "," : "") + std::to_string(n_[j]);
    return s + ")";
}

std::vector<double> MultipointPade::all_zeros() const
{
    std::vector<double> z;
    for (const auto& zs : q_zeros) z.insert(z.end(), zs.begin(), zs.end());
    std::sort(z.begin(), z.end());
    return z;
}

double MultipointPade::log_abs_cofactor(std::size_t j, double x) const
{
    double v = 0.0;
    for (std::size_t k = 0; k < q_zeros.size(); ++k)
        if (k != j) v += log_root_product<double>(q_zeros[k], x);
    return v;
}

int default_branch_order(const AngelescoSystem& system, const MultiIndex& n, std::size_t j)
{
    const Interval& I = system.sigma(j).interval();
    const double g = gap(I, system.sigma0().interval());
    const int nodes = n.node_count(j);
    return analytic_order(I, g, 2 * n[j] + n.total()) + nodes + 16;
}

MultipointPade solve_multipoint(const AngelescoSystem& system, const MultiIndex& n,
                                const std::vector<NodeSet>& node_sets, const MultipointOptions& options)
{
    validate_inputs(system, n, node_sets);
    const std::size_t m = system.m();

    MultipointPade mp;
    mp.n = n;
    mp.node_sets = node_sets;
    for (auto& ns : mp.node_sets) std::sort(ns.nodes.begin(), ns.nodes.end());
    mp.q_zeros.resize(m);
    mp.branch_orders.resize(m);

    for (std::size_t j = 0; j < m; ++j) {
        mp.branch_orders[j] = options.branch_order > 0 ? options.branch_order : default_branch_order(system, n, j);
        if (n[j] == 0) continue;
        if (j < options.initial_zeros.size() && static_cast<int>(options.initial_zeros[j].size()) == n[j]) {
            mp.q_zeros[j] = options.initial_zeros[j];
        } else {
            mp.q_zeros[j] = gauss_quadrature(system.sigma(j), n[j]).nodes;
        }
    }

    // Block Gauss-Seidel: each factor is the orthogonal polynomial of the
    // varying weight built from the current values of the other factors.
    std::vector<std::size_t> active;
    for (std::size_t j = 0; j < m; ++j)
        if (n[j] > 0) active.push_back(j);
    double change = 0.0, best = INFINITY;
    int sweep = 0, stalled = 0;
    const int max_sweeps = active.size() <= 1 ? 1 : std::max(options.max_sweeps, 1);
    for (sweep = 1; sweep <= max_sweeps; ++sweep) {
        change = 0.0;
        for (std::size_t j : active) {
            const Quadrature& quad = gauss_quadrature(system.sigma(j), mp.branch_orders[j]);
            const auto w = normalized_exp(log_varying_weight(mp, j, quad));
            auto zeros = varying_orthogonal_zeros(quad, w, n[j]);
            const double len = quad.interval.length();
            for (std::size_t i = 0; i < zeros.size(); ++i)
                change = std::max(change, std::abs(zeros[i] - mp.q_zeros[j][i]) / len);
            mp.q_zeros[j] = std::move(zeros);
        }
        if (change <= options.sweep_tol) break;
        // at the roundoff floor the movement stops shrinking
        if (change < best) {
            best = change;
            stalled = 0;
        } else if (change < 1e-12 && ++stalled >= 3) {
            break;
        }
    }
    mp.sweeps = std::min(sweep, max_sweeps);
    // a stalled sweep at roundoff level is still a solution; a large one is not
    if (active.size() > 1 && change > options.sweep_tol && change > 1e-12)
        fail(ErrorKind::degeneracy,
             "block orthogonality sweeps for " + n.str() + " stalled with zero movement " + fmt(change) +
                 "; the quadrature order may be too low",
             {}, {change});

    mp.q = PolynomialRep::from_roots(mp.all_zeros(), system.hull());

    // p_j(x) = int (q(x) w(t) - w(x) q(t)) / ((x - t) w(t)) dsigma_j(t), sampled on Delta_0.
    const Interval& d0 = system.sigma0().interval();
    mp.p.reserve(m);
    for (std::size_t j = 0; j < m; ++j) {
        if (n.total() == 0) {
            mp.p.emplace_back(d0);
            continue;
        }
        const Quadrature& quad = gauss_quadrature(system.sigma(j), mp.branch_orders[j]);
        std::vector<double> ratio(quad.size());
        for (std::size_t i = 0; i < quad.size(); ++i) ratio[i] = mp.q_at(quad.nodes[i]) / mp.w_at(j, quad.nodes[i]);
        const auto pts = chebyshev_points(d0, static_cast<std::size_t>(n.total()));
        std::vector<double> values(pts.size());
        for (std::size_t k = 0; k < pts.size(); ++k) {
            const double x = pts[k];
            const double qx = mp.q_at(x), wx = mp.w_at(j, x);
            double s = 0.0;
            for (std::size_t i = 0; i < quad.size(); ++i)
                s += quad.weights[i] * (qx - wx * ratio[i]) / (x - quad.nodes[i]);
            values[k] = s;
        }
        mp.p.push_back(PolynomialRep::from_chebyshev_values(d0, values));
    }

    for (std::size_t j = 0; j < m; ++j)
        mp.orto_total_residual =
            std::max(mp.orto_total_residual, orto_residual(mp, system, j, mp.branch_orders[j] + 16));
    return mp;
}

void check_evaluation_point(const MultipointPade& mp, const AngelescoSystem& system, Complex z)
{
    if (!(system.sigma0().interval().distance(z) > 0.0))
        fail(ErrorKind::domain, "evaluation point lies on Delta_0");
    for (std::size_t j = 0; j < system.m(); ++j)
        if (!(system.sigma(j).interval().distance(z) > 0.0))
            fail(ErrorKind::domain, "evaluation point lies on Delta_" + std::to_string(j + 1));
    const double scale = system.hull().length();
    for (const auto& zs : mp.q_zeros)
        for (double r : zs)
            if (std::abs(z - r) <= 1e-12 * scale)
                fail(ErrorKind::pole, "evaluation point is at a zero of the denominator (" + fmt(r) + ")");
}

namespace {

// Integral factor of the remainder with its log-magnitude split off:
// returns (log scale, sum) such that the integral equals exp(scale) * sum.
std::pair<double, Complex> remainder_sum(const MultipointPade& mp, std::size_t j, const Quadrature& quad, Complex z)
{
    std::vector<double> lg(quad.size()), sg(quad.size());
    for (std::size_t i = 0; i < quad.size(); ++i) {
        const double t = quad.nodes[i];
        lg[i] = 2.0 * log_root_product<double>(mp.q_zeros[j], t) + mp.log_abs_cofactor(j, t) -
                log_root_product<double>(mp.node_sets[j].nodes, t);
        const double s = mp.q_cofactor(j, t) * mp.w_at(j, t);
        sg[i] = s < 0 ? -1.0 : 1.0;
    }
    const double mx = *std::max_element(lg.begin(), lg.end());
    Complex sum = 0.0;
    for (std::size_t i = 0; i < quad.size(); ++i)
        sum += quad.weights[i] * sg[i] * std::exp(lg[i] - mx) / (z - quad.nodes[i]);
    return {mx, sum};
}

// Complex log of the remainder from the integral representation.
Complex log_remainder(const MultipointPade& mp, const AngelescoSystem& system, std::size_t j, Complex z)
{
    int order = mp.branch_orders.empty() ? default_branch_order(system, mp.n, j) : mp.branch_orders[j];
    auto [scale, sum] = remainder_sum(mp, j, gauss_quadrature(system.sigma(j), order), z);
    for (int it = 0; it < 6; ++it) {
        order *= 2;
        auto [s2, sum2] = remainder_sum(mp, j, gauss_quadrature(system.sigma(j), order), z);
        const Complex a = sum * std::exp(scale - s2);
        const bool done = std::abs(sum2 - a) <= 1e-14 * std::abs(sum2);
        scale = s2;
        sum = sum2;
        if (done) break;
    }
    if (sum == 0.0) return {-std::numeric_limits<double>::infinity(), 0.0};
    const Complex prefactor =
        log_product(mp.node_sets[j].nodes, z) - 2.0 * log_product(mp.q_zeros[j], z);
    Complex cof = 0.0;
    for (std::size_t k = 0; k < mp.q_zeros.size(); ++k)
        if (k != j) cof += log_product(mp.q_zeros[k], z);
    return prefactor - cof + scale + std::log(sum);
}

} // namespace

Complex remainder_integral(const MultipointPade& mp, const AngelescoSystem& system, std::size_t j, Complex z)
{
    check_evaluation_point(mp, system, z);
    const Complex lr = log_remainder(mp, system, j, z);
    if (!std::isfinite(lr.real())) return 0.0;
    return std::exp(lr);
}

double log_abs_remainder(const MultipointPade& mp, const AngelescoSystem& system, std::size_t j, Complex z)
{
    check_evaluation_point(mp, system, z);
    return log_remainder(mp, system, j, z).real();
}

Complex numerator_at(const MultipointPade& mp, const AngelescoSystem& system, std::size_t j, Complex z)
{
    if (j >= mp.m()) fail(ErrorKind::validation, "branch index out of range");
    if (mp.n.total() == 0) return 0.0;
    if (!(system.sigma(j).interval().distance(z) > 0.0))
        fail(ErrorKind::domain, "numerator evaluated on Delta_" + std::to_string(j + 1));
    const Complex qz = mp.q_at(z), wz = mp.w_at(j, z);
    auto eval = [&](int order) {
        const Quadrature& quad = gauss_quadrature(system.sigma(j), order);
        Complex s = 0.0;
        for (std::size_t i = 0; i < quad.size(); ++i) {
            const double t = quad.nodes[i];
            s += quad.weights[i] * (qz - wz * (mp.q_at(t) / mp.w_at(j, t))) / (z - t);
        }
        return s;
    };
    int order = mp.branch_orders[j];
    Complex prev = eval(order);
    for (int it = 0; it < 6; ++it) {
        order *= 2;
        const Complex cur = eval(order);
        if (std::abs(cur - prev) <= 1e-14 * std::abs(cur)) return cur;
        prev = cur;
    }
    return prev;
}

std::pair<Complex, Complex> remainder_identity_residual(const MultipointPade& mp, const AngelescoSystem& system,
                                                        std::size_t j, Complex z)
{
    check_evaluation_point(mp, system, z);
    const Complex direct = markov_transform(system.sigma(j), z, 64) - numerator_at(mp, system, j, z) / mp.q_at(z);
    return {direct, remainder_integral(mp, system, j, z)};
}

std::pair<PolynomialRep, PolynomialRep> split_denominator(const MultipointPade& mp, const AngelescoSystem& system,
                                                          std::size_t j)
{
    if (j >= mp.m()) fail(ErrorKind::validation, "branch index out of range");
    const Interval& I = system.sigma(j).interval();
    for (double r : mp.q_zeros[j]) {
        if (std::min(r - I.lo, I.hi - r) <= 1e-12 * I.length())
            fail(ErrorKind::boundary, "zero " + fmt(r) + " of q is within 1e-12 of an endpoint of Delta_" +
                                          std::to_string(j + 1));
        if (!I.contains_open(r))
            fail(ErrorKind::structural, "zero " + fmt(r) + " assigned to Delta_" + std::to_string(j + 1) +
                                            " lies outside it");
    }
    std::vector<double> rest;
    for (std::size_t k = 0; k < mp.m(); ++k)
        if (k != j) rest.insert(rest.end(), mp.q_zeros[k].begin(), mp.q_zeros[k].end());
    std::sort(rest.begin(), rest.end());
    const Interval basis = mp.q.basis();
    return {PolynomialRep::from_roots(mp.q_zeros[j], basis), PolynomialRep::from_roots(rest, basis)};
}

} // namespace fpade
