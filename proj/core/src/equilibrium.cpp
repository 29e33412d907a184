#include "fpade/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>

#include "fpade/error.hpp"
#include "fpade/polynomial.hpp"

namespace fpade {

namespace {

std::string fmt(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

using Index = Eigen::Index;

InteractionMatrix base_matrix(const RayVector& p, InteractionKind kind)
{
    const std::size_t m = p.m();
    InteractionMatrix C;
    C.kind = kind;
    C.entries = Eigen::MatrixXd::Zero(static_cast<Index>(2 * m), static_cast<Index>(2 * m));
    auto& E = C.entries;
    for (std::size_t j = 0; j < m; ++j) {
        const auto J = static_cast<Index>(j), JM = static_cast<Index>(m + j);
        for (std::size_t k = 0; k < m; ++k) E(J, static_cast<Index>(k)) = j == k ? 2.0 * p[j] * p[j] : p[j] * p[k];
        E(J, JM) = E(JM, J) = -p[j] * (1.0 + p[j]);
    }
    return C;
}

/// Euclidean projection onto the probability simplex.
void project_simplex(double* v, std::size_t n, std::vector<double>& scratch)
{
    scratch.assign(v, v + n);
    std::sort(scratch.begin(), scratch.end(), std::greater<>());
    double cum = 0.0, theta = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        cum += scratch[r];
        const double t = (cum - 1.0) / static_cast<double>(r + 1);
        if (scratch[r] - t > 0.0) theta = t;
    }
    for (std::size_t i = 0; i < n; ++i) v[i] = std::max(v[i] - theta, 0.0);
}

/// Dense problem data: the stacked grid and H(a, b) = c_{comp a, comp b} K(a, b).
struct Problem {
    std::size_t ncomp = 0;
    std::size_t N = 0;
    std::vector<EquilibriumGrid> grids;
    Eigen::MatrixXd H;
};

double kernel(double x, double y, double half_width)
{
    return x == y ? -std::log(half_width) : -std::log(std::abs(x - y));
}

Problem build_problem(const InteractionMatrix& C, const std::vector<Interval>& intervals, std::size_t N)
{
    Problem P;
    P.ncomp = intervals.size();
    P.N = N;
    for (const auto& I : intervals) P.grids.push_back(equilibrium_grid(I, N));
    const auto total = static_cast<Index>(P.ncomp * N);
    P.H.resize(total, total);
    for (std::size_t a = 0; a < P.ncomp; ++a)
        for (std::size_t b = a; b < P.ncomp; ++b) {
            const double c = C(a, b);
            const auto& ga = P.grids[a];
            const auto& gb = P.grids[b];
            for (std::size_t i = 0; i < N; ++i)
                for (std::size_t k = 0; k < N; ++k) {
                    const double v = c * kernel(ga.points[i], gb.points[k], ga.half_widths[i]);
                    const auto r = static_cast<Index>(a * N + i), s = static_cast<Index>(b * N + k);
                    P.H(r, s) = v;
                    P.H(s, r) = v;
                }
        }
    return P;
}

struct Kkt {
    double violation = 0.0;
    std::vector<double> per_component;
    std::vector<double> omega;
};

Kkt kkt(const Problem& P, const Eigen::VectorXd& mu, const Eigen::VectorXd& W)
{
    Kkt out;
    const double threshold = 1e-3 / static_cast<double>(P.N);
    for (std::size_t c = 0; c < P.ncomp; ++c) {
        const auto off = static_cast<Index>(c * P.N);
        const double om = W.segment(off, static_cast<Index>(P.N)).minCoeff();
        double v = 0.0;
        for (std::size_t i = 0; i < P.N; ++i) {
            const auto r = off + static_cast<Index>(i);
            if (mu(r) > threshold) v = std::max(v, std::abs(W(r) - om));
        }
        out.omega.push_back(om);
        out.per_component.push_back(v);
        out.violation = std::max(out.violation, v);
    }
    return out;
}

double largest_eigenvalue(const Eigen::MatrixXd& H)
{
    Eigen::VectorXd v = Eigen::VectorXd::Ones(H.rows()).normalized();
    double lambda = 0.0;
    for (int it = 0; it < 200; ++it) {
        Eigen::VectorXd w = H * v;
        const double nl = w.norm();
        if (nl == 0.0) return 1.0;
        const bool done = std::abs(nl - lambda) < 1e-6 * nl;
        lambda = nl;
        v = w / nl;
        if (done) break;
    }
    return lambda;
}

/// Monotone FISTA with backtracking on f = mu^T H mu.
struct GradientResult {
    Eigen::VectorXd mu;
    Eigen::VectorXd W;
    int iterations = 0;
};

GradientResult gradient_phase(const Problem& P, double tol, const EquilibriumOptions& opt,
                              std::vector<double>& energies)
{
    const Index n = P.H.rows();
    const auto N = static_cast<Index>(P.N);
    std::vector<double> scratch;
    auto project = [&](Eigen::VectorXd& v) {
        for (std::size_t c = 0; c < P.ncomp; ++c) project_simplex(v.data() + c * P.N, P.N, scratch);
    };

    Eigen::VectorXd x(n);
    for (std::size_t c = 0; c < P.ncomp; ++c) {
        // arcsine start
        const auto& g = P.grids[c];
        const double lo = g.points.front() - g.half_widths.front();
        const double hi = g.points.back() + g.half_widths.back();
        double edge = lo;
        for (std::size_t i = 0; i < P.N; ++i) {
            const double next = edge + 2.0 * g.half_widths[i];
            auto F = [&](double t) {
                return std::asin(std::clamp((2.0 * t - lo - hi) / (hi - lo), -1.0, 1.0)) / std::numbers::pi;
            };
            x(static_cast<Index>(c * P.N + i)) = F(next) - F(edge);
            edge = next;
        }
        x.segment(static_cast<Index>(c) * N, N) /= x.segment(static_cast<Index>(c) * N, N).sum();
    }
    Eigen::VectorXd Hx = P.H * x;
    double fx = x.dot(Hx);
    energies.push_back(fx);

    double L = 2.0 * largest_eigenvalue(P.H);
    Eigen::VectorXd y = x, Hy = Hx;
    double fy = fx, t = 1.0;
    GradientResult res;
    double stall_ref = fx;
    for (int it = 1; it <= opt.max_iter; ++it) {
        Eigen::VectorXd grad = 2.0 * Hy;
        Eigen::VectorXd z, Hz;
        double fz = 0.0;
        for (int bt = 0; bt < 60; ++bt) {
            z = y - grad / L;
            project(z);
            Hz = P.H * z;
            fz = z.dot(Hz);
            const Eigen::VectorXd d = z - y;
            if (fz <= fy + grad.dot(d) + 0.5 * L * d.squaredNorm() + 1e-15 * std::abs(fy)) break;
            L *= 2.0;
        }
        const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        Eigen::VectorXd xn, Hxn;
        double fxn;
        if (fz <= fx) {
            xn = z;
            Hxn = Hz;
            fxn = fz;
        } else {
            xn = x;
            Hxn = Hx;
            fxn = fx;
        }
        y = xn + (t / tn) * (z - xn) + ((t - 1.0) / tn) * (xn - x);
        Hy = Hxn + (t / tn) * (Hz - Hxn) + ((t - 1.0) / tn) * (Hxn - Hx);
        fy = y.dot(Hy);
        x = std::move(xn);
        Hx = std::move(Hxn);
        fx = fxn;
        t = tn;
        energies.push_back(fx);
        res.iterations = it;
        if (it % opt.check_every == 0) {
            if (kkt(P, x, Hx).violation < tol) break;
            // stalled energy
            if (std::abs(stall_ref - fx) <= 1e-15 * std::abs(fx)) break;
            stall_ref = fx;
        }
    }
    res.mu = std::move(x);
    res.W = std::move(Hx);
    return res;
}

/// Primal active-set refinement: exact minimizers on faces of the product of
/// simplices, stepping back to feasibility when masses turn negative.
void active_set_polish(const Problem& P, Eigen::VectorXd& mu, Eigen::VectorXd& W, double tol,
                       std::vector<double>& energies)
{
    const Index n = P.H.rows();
    const auto nc = static_cast<Index>(P.ncomp);
    std::vector<bool> free(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) free[static_cast<std::size_t>(i)] = mu(i) > 0.0;

    for (int round = 0; round < 100; ++round) {
        std::vector<Index> F;
        for (Index i = 0; i < n; ++i)
            if (free[static_cast<std::size_t>(i)]) F.push_back(i);
        const auto nf = static_cast<Index>(F.size());
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(nf + nc, nf + nc);
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nf + nc);
        for (Index a = 0; a < nf; ++a) {
            for (Index b = 0; b < nf; ++b) A(a, b) = P.H(F[a], F[b]);
            const Index c = F[a] / static_cast<Index>(P.N);
            A(a, nf + c) = -1.0;
            A(nf + c, a) = 1.0;
        }
        rhs.tail(nc).setOnes();
        const Eigen::VectorXd sol = A.partialPivLu().solve(rhs);
        if (!sol.allFinite()) return;

        Eigen::VectorXd target = Eigen::VectorXd::Zero(n);
        for (Index a = 0; a < nf; ++a) target(F[a]) = sol(a);
        double alpha = 1.0;
        Index blocking = -1;
        for (Index a = 0; a < nf; ++a) {
            const Index i = F[a];
            if (target(i) < 0.0) {
                const double s = mu(i) / (mu(i) - target(i));
                if (s < alpha) {
                    alpha = s;
                    blocking = i;
                }
            }
        }
        Eigen::VectorXd next = mu + alpha * (target - mu);
        for (Index i = 0; i < n; ++i)
            if (!free[static_cast<std::size_t>(i)] || next(i) < 0.0) next(i) = 0.0;
        Eigen::VectorXd Wn = P.H * next;
        const double e = next.dot(Wn);
        if (e > energies.back() + 1e-13 * std::abs(energies.back())) return;
        mu = std::move(next);
        W = std::move(Wn);
        energies.push_back(e);
        if (blocking >= 0) {
            for (Index i = 0; i < n; ++i)
                if (mu(i) <= 0.0) free[static_cast<std::size_t>(i)] = false;
            continue;
        }
        // face optimum reached; release points whose potential dips below omega
        bool released = false;
        for (Index i = 0; i < n; ++i) {
            const auto c = static_cast<std::size_t>(i / static_cast<Index>(P.N));
            const double om = sol(nf + static_cast<Index>(c));
            if (!free[static_cast<std::size_t>(i)] && W(i) < om - 1e-3 * tol) {
                free[static_cast<std::size_t>(i)] = true;
                released = true;
            }
        }
        if (!released) return;
    }
}

} // namespace

RayVector::RayVector(std::vector<double> p) : p_(std::move(p))
{
    if (p_.empty()) fail(ErrorKind::validation, "ray vector must have at least one entry");
    double s = 0.0;
    std::vector<std::string> problems;
    for (std::size_t j = 0; j < p_.size(); ++j) {
        if (!(p_[j] > 0.0 && p_[j] < 1.0))
            problems.push_back("p[" + std::to_string(j) + "] = " + fmt(p_[j]) + " is not in (0, 1)");
        s += p_[j];
    }
    if (std::abs(s - 1.0) > 1e-12) problems.push_back("entries sum to " + fmt(s) + ", expected 1");
    if (!problems.empty()) {
        std::string msg = "invalid ray vector: " + problems.front();
        for (std::size_t i = 1; i < problems.size(); ++i) msg += "; " + problems[i];
        fail(ErrorKind::validation, msg, problems);
    }
}

RayVector RayVector::unchecked(std::vector<double> p) { return RayVector(std::move(p), NoCheck{}); }

InteractionMatrix interaction_matrix_linear(const RayVector& p)
{
    InteractionMatrix C = base_matrix(p, InteractionKind::C1);
    const std::size_t m = p.m();
    for (std::size_t j = 0; j < m; ++j) {
        const auto J = static_cast<Index>(m + j);
        C.entries(J, J) = 2.0 * (1.0 + p[j]) * (1.0 + p[j]);
    }
    return C;
}

InteractionMatrix interaction_matrix_nonlinear(const RayVector& p)
{
    InteractionMatrix C = base_matrix(p, InteractionKind::C2);
    const std::size_t m = p.m();
    const double md = static_cast<double>(m);
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t k = 0; k < m; ++k) {
            const auto J = static_cast<Index>(m + j), K = static_cast<Index>(m + k);
            C.entries(J, K) = j == k ? 2.0 * md * (1.0 + p[j]) * (1.0 + p[j]) / (md + 1.0)
                                     : -2.0 * (1.0 + p[j]) * (1.0 + p[k]) / (md + 1.0);
        }
    return C;
}

double MinorPair::relative_error() const
{
    const double scale = std::max(std::abs(closed_form), std::abs(computed));
    return scale == 0.0 ? 0.0 : std::abs(computed - closed_form) / scale;
}

std::vector<MinorPair> principal_minors(const InteractionMatrix& C, const RayVector& p)
{
    const std::size_t m = p.m();
    if (C.size() != 2 * m)
        fail(ErrorKind::validation, "interaction matrix of size " + std::to_string(C.size()) +
                                        " does not match a ray of length " + std::to_string(m));
    std::vector<MinorPair> out;
    double prod_p = 1.0;
    for (std::size_t j = 1; j <= 2 * m; ++j) {
        const auto J = static_cast<Index>(j);
        const double det = C.entries.topLeftCorner(J, J).partialPivLu().determinant();
        double closed;
        if (j <= m) {
            prod_p *= p[j - 1];
            closed = prod_p * prod_p * static_cast<double>(j + 1);
        } else {
            double prod = prod_p;
            for (std::size_t k = 0; k < j - m; ++k) prod *= 1.0 + p[k];
            const double factor = C.kind == InteractionKind::C1 ? static_cast<double>(m + 1)
                                                                : static_cast<double>(2 * m + 1 - j);
            closed = prod * prod * factor;
        }
        out.push_back({det, closed});
    }
    return out;
}

std::vector<MinorPair> principal_minor_check(const InteractionMatrix& C, const RayVector& p)
{
    auto minors = principal_minors(C, p);
    std::vector<std::string> bad;
    for (std::size_t j = 0; j < minors.size(); ++j)
        if (minors[j].relative_error() > 1e-9)
            bad.push_back("minor " + std::to_string(j + 1) + ": computed " + fmt(minors[j].computed) +
                          ", closed form " + fmt(minors[j].closed_form));
    if (!bad.empty()) {
        std::string msg = std::string(C.kind == InteractionKind::C1 ? "C1" : "C2") +
                          " principal minors disagree with the closed forms: " + bad.front();
        for (std::size_t i = 1; i < bad.size(); ++i) msg += "; " + bad[i];
        fail(ErrorKind::formula_regression, msg, bad);
    }
    return minors;
}

void DiscreteMeasure::validate() const
{
    if (grid.size() != masses.size())
        fail(ErrorKind::validation, "grid and masses differ in length");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) fail(ErrorKind::validation, "grid is not strictly increasing");
    for (double v : masses)
        if (!(v >= 0.0)) fail(ErrorKind::validation, "negative mass " + fmt(v));
    if (std::abs(mass() - total) > 1e-12)
        fail(ErrorKind::validation, "total mass " + fmt(mass()) + " differs from declared " + fmt(total));
}

double DiscreteMeasure::mass() const { return std::accumulate(masses.begin(), masses.end(), 0.0); }

double DiscreteMeasure::cdf(double x) const
{
    const auto it = std::upper_bound(grid.begin(), grid.end(), x);
    return std::accumulate(masses.begin(), masses.begin() + (it - grid.begin()), 0.0);
}

std::vector<bool> DiscreteMeasure::support_mask() const
{
    const double threshold = total / static_cast<double>(std::max<std::size_t>(masses.size(), 1)) * 1e-3;
    std::vector<bool> out(masses.size());
    for (std::size_t i = 0; i < masses.size(); ++i) out[i] = masses[i] > threshold;
    return out;
}

EquilibriumGrid equilibrium_grid(const Interval& interval, std::size_t grid_size)
{
    if (grid_size < 2) fail(ErrorKind::validation, "grid size must be at least 2");
    EquilibriumGrid g;
    g.points = chebyshev_points(interval, grid_size);
    g.half_widths.resize(grid_size);
    for (std::size_t i = 0; i < grid_size; ++i) {
        const double lo = i == 0 ? interval.lo : 0.5 * (g.points[i - 1] + g.points[i]);
        const double hi = i + 1 == grid_size ? interval.hi : 0.5 * (g.points[i] + g.points[i + 1]);
        g.half_widths[i] = 0.5 * (hi - lo);
    }
    return g;
}

DiscreteMeasure arcsine_measure(const Interval& interval, std::size_t grid_size)
{
    const EquilibriumGrid g = equilibrium_grid(interval, grid_size);
    DiscreteMeasure mu;
    mu.grid = g.points;
    mu.masses.resize(grid_size);
    auto F = [&](double x) { return std::asin(std::clamp(interval.to_unit(x), -1.0, 1.0)) / std::numbers::pi; };
    double edge = interval.lo;
    for (std::size_t i = 0; i < grid_size; ++i) {
        const double next = i + 1 == grid_size ? interval.hi : 0.5 * (g.points[i] + g.points[i + 1]);
        mu.masses[i] = F(next) - F(edge);
        edge = next;
    }
    return mu;
}

std::vector<Interval> equilibrium_intervals(const AngelescoSystem& system)
{
    std::vector<Interval> out;
    for (const auto& s : system.sigmas()) out.push_back(s.interval());
    for (std::size_t j = 0; j < system.m(); ++j) out.push_back(system.sigma0().interval());
    return out;
}

EquilibriumSolution solve_equilibrium(const InteractionMatrix& C, const std::vector<Interval>& intervals,
                                      std::size_t grid_size, double tol, const EquilibriumOptions& options)
{
    if (intervals.size() != C.size())
        fail(ErrorKind::validation, std::to_string(intervals.size()) + " intervals given for a " +
                                        std::to_string(C.size()) + "-component interaction matrix");
    if (grid_size < 2) fail(ErrorKind::validation, "grid size must be at least 2");
    if (!(tol > 0.0)) fail(ErrorKind::validation, "KKT tolerance must be positive");
    if (options.max_iter < 1 || options.check_every < 1)
        fail(ErrorKind::validation, "iteration budget must be positive");
    if ((C.entries - C.entries.transpose()).cwiseAbs().maxCoeff() > 1e-14 * C.entries.cwiseAbs().maxCoeff())
        fail(ErrorKind::validation, "interaction matrix is not symmetric");

    const Problem P = build_problem(C, intervals, grid_size);
    EquilibriumSolution sol;
    sol.kind = C.kind;
    sol.intervals = intervals;
    GradientResult g = gradient_phase(P, tol, options, sol.energy_trace);
    sol.iterations = g.iterations;
    if (options.polish) active_set_polish(P, g.mu, g.W, tol, sol.energy_trace);

    const Kkt k = kkt(P, g.mu, g.W);
    for (std::size_t c = 0; c < P.ncomp; ++c) {
        DiscreteMeasure d;
        d.grid = P.grids[c].points;
        d.masses.resize(grid_size);
        for (std::size_t i = 0; i < grid_size; ++i) d.masses[i] = g.mu(static_cast<Index>(c * grid_size + i));
        const double s = d.mass();
        for (double& v : d.masses) v /= s;
        sol.components.push_back(std::move(d));
        sol.half_widths.push_back(P.grids[c].half_widths);
    }
    sol.constants = k.omega;
    sol.kkt_violation = k.violation;
    sol.energy = g.mu.dot(g.W);
    if (!(k.violation < tol)) {
        std::vector<std::string> details;
        for (std::size_t c = 0; c < P.ncomp; ++c)
            details.push_back("component " + std::to_string(c + 1) + ": " + fmt(k.per_component[c]));
        fail(ErrorKind::non_convergence,
             "equilibrium KKT violation " + fmt(k.violation) + " above tolerance " + fmt(tol) + " after " +
                 std::to_string(sol.iterations) + " iterations",
             details, k.per_component);
    }
    return sol;
}

double discrete_energy(const EquilibriumSolution& sol, const InteractionMatrix& C,
                       const std::vector<DiscreteMeasure>& measures)
{
    const std::size_t n = sol.components.size();
    if (measures.size() != n) fail(ErrorKind::validation, "component count mismatch");
    double e = 0.0;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            const auto& ga = sol.components[a].grid;
            const auto& gb = sol.components[b].grid;
            double s = 0.0;
            for (std::size_t i = 0; i < ga.size(); ++i) {
                if (measures[a].masses[i] == 0.0) continue;
                double r = 0.0;
                for (std::size_t k = 0; k < gb.size(); ++k)
                    r += measures[b].masses[k] * kernel(ga[i], gb[k], sol.half_widths[a][i]);
                s += measures[a].masses[i] * r;
            }
            e += C(a, b) * s;
        }
    return e;
}

double combined_potential(const EquilibriumSolution& sol, const InteractionMatrix& C, std::size_t j, Complex z)
{
    const std::size_t n = sol.components.size();
    if (j >= n)
        fail(ErrorKind::validation, "component index " + std::to_string(j + 1) + " out of range 1.." +
                                        std::to_string(n));
    double W = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const auto& mu = sol.components[k];
        double V = 0.0;
        for (std::size_t i = 0; i < mu.grid.size(); ++i) {
            const double d = std::abs(z - mu.grid[i]);
            const double h = sol.half_widths[k][i];
            V += mu.masses[i] * (d <= 1e-14 * h ? -std::log(h) : -std::log(d));
        }
        W += C(j, k) * V;
    }
    return W;
}

std::vector<double> combined_potential_on_grid(const EquilibriumSolution& sol, const InteractionMatrix& C,
                                               std::size_t j)
{
    if (j >= sol.components.size())
        fail(ErrorKind::validation, "component index " + std::to_string(j + 1) + " out of range");
    std::vector<double> out;
    for (double x : sol.components[j].grid) out.push_back(combined_potential(sol, C, j, x));
    return out;
}

double rate_function(const EquilibriumSolution& sol, const InteractionMatrix& C, const RayVector& p, std::size_t j,
                     Complex z)
{
    if (j >= p.m()) fail(ErrorKind::validation, "branch index " + std::to_string(j + 1) + " out of range");
    for (const auto& I : sol.intervals)
        if (I.distance(z) == 0.0)
            fail(ErrorKind::domain, "rate function evaluated on the interval [" + fmt(I.lo) + ", " + fmt(I.hi) + "]");
    return std::exp((combined_potential(sol, C, j, z) - sol.constants[j]) / p[j]);
}

double variational_gap(const EquilibriumSolution& sol, const InteractionMatrix& C,
                       const std::vector<DiscreteMeasure>& competitor)
{
    const std::size_t n = sol.components.size();
    if (competitor.size() != n) fail(ErrorKind::validation, "component count mismatch");
    double gap_sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const auto W = combined_potential_on_grid(sol, C, j);
        for (std::size_t i = 0; i < W.size(); ++i)
            gap_sum += W[i] * (competitor[j].masses[i] - sol.components[j].masses[i]);
    }
    return gap_sum;
}

} // namespace fpade
