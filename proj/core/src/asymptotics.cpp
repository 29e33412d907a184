#include "fpade/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "fpade/error.hpp"
#include "fpade/linear_fp.hpp"
#include "fpade/nonlinear_fp.hpp"
#include "fpade/parallel.hpp"

namespace fpade {

namespace {

std::string fmt(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

double log_sum_exp(const std::vector<double>& v)
{
    const double mx = *std::max_element(v.begin(), v.end());
    double s = 0.0;
    for (double x : v) s += std::exp(x - mx);
    return mx + std::log(s);
}

std::vector<MultipointPade> solve_schedule(const AngelescoSystem& system, const RaySchedule& schedule,
                                           ApproximantKind kind, const FixedPointOptions* options)
{
    std::vector<MultipointPade> out(schedule.size());
    parallel_for(schedule.size(), [&](std::size_t i) {
        out[i] = solve_kind(system, schedule.multi_index(i), kind, options);
    });
    return out;
}

bool complex_less(Complex a, Complex b)
{
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
}

} // namespace

RaySchedule::RaySchedule(RayVector p, std::vector<int> sizes) : p_(std::move(p)), sizes_(std::move(sizes))
{
    if (sizes_.empty()) fail(ErrorKind::validation, "schedule needs at least one size");
    for (std::size_t i = 0; i < sizes_.size(); ++i) {
        if (sizes_[i] < 1) fail(ErrorKind::validation, "schedule sizes must be positive");
        if (i > 0 && sizes_[i] <= sizes_[i - 1])
            fail(ErrorKind::validation, "schedule sizes must be strictly increasing");
        if (sizes_[i] > kMaxTotalDegree)
            fail(ErrorKind::validation, "schedule size " + std::to_string(sizes_[i]) +
                                            " exceeds the supported ceiling of " + std::to_string(kMaxTotalDegree));
    }
}

MultiIndex RaySchedule::round_ray(const RayVector& p, int size)
{
    const std::size_t m = p.m();
    std::vector<int> n(m);
    std::vector<std::pair<double, std::size_t>> frac(m);
    int used = 0;
    for (std::size_t j = 0; j < m; ++j) {
        const double v = p[j] * size;
        n[j] = static_cast<int>(std::floor(v));
        used += n[j];
        frac[j] = {v - n[j], j};
    }
    std::stable_sort(frac.begin(), frac.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t r = 0; used < size; ++r, ++used) ++n[frac[r % m].second];
    return MultiIndex(n);
}

double RaySchedule::max_deviation() const
{
    double worst = 0.0;
    for (std::size_t i = 0; i < sizes_.size(); ++i) {
        const MultiIndex n = multi_index(i);
        for (std::size_t j = 0; j < p_.m(); ++j)
            worst = std::max(worst, std::abs(static_cast<double>(n[j]) / sizes_[i] - p_[j]));
    }
    return worst;
}

const char* to_string(ApproximantKind kind) noexcept
{
    return kind == ApproximantKind::linear ? "linear" : "nonlinear";
}

DiscreteMeasure zero_counting_measure(const PolynomialRep& poly)
{
    const int d = poly.degree();
    if (d < 1) fail(ErrorKind::validation, "zero counting measure needs degree at least 1");
    return zero_counting_measure(poly_zeros(poly, true));
}

DiscreteMeasure zero_counting_measure(std::vector<double> zeros)
{
    if (zeros.empty()) fail(ErrorKind::validation, "zero counting measure needs at least one zero");
    std::sort(zeros.begin(), zeros.end());
    DiscreteMeasure mu;
    const double w = 1.0 / static_cast<double>(zeros.size());
    for (double x : zeros) {
        // coincident zeros share one atom
        if (!mu.grid.empty() && mu.grid.back() == x) {
            mu.masses.back() += w;
            continue;
        }
        mu.grid.push_back(x);
        mu.masses.push_back(w);
    }
    return mu;
}

double cdf_distance(const DiscreteMeasure& a, const DiscreteMeasure& b)
{
    if (std::abs(a.mass() - b.mass()) > 1e-9)
        fail(ErrorKind::validation, "cdf distance between measures of mass " + fmt(a.mass()) + " and " +
                                        fmt(b.mass()));
    std::size_t i = 0, k = 0;
    double Fa = 0.0, Fb = 0.0, worst = 0.0;
    while (i < a.grid.size() || k < b.grid.size()) {
        const double xa = i < a.grid.size() ? a.grid[i] : INFINITY;
        const double xb = k < b.grid.size() ? b.grid[k] : INFINITY;
        const double x = std::min(xa, xb);
        while (i < a.grid.size() && a.grid[i] == x) Fa += a.masses[i++];
        while (k < b.grid.size() && b.grid[k] == x) Fb += b.masses[k++];
        worst = std::max(worst, std::abs(Fa - Fb));
    }
    return worst;
}

MultipointPade solve_kind(const AngelescoSystem& system, const MultiIndex& n, ApproximantKind kind,
                          const FixedPointOptions* options)
{
    if (kind == ApproximantKind::linear)
        return solve_linear_fp(system, n, options ? *options : linear_default_options()).interpolant;
    return fixed_point_solve(system, n, options ? *options : FixedPointOptions{}).interpolant;
}

bool ZeroDistributionReport::decreasing() const
{
    if (rows.size() < 2) return false;
    const auto& first = rows.front();
    const auto& last = rows.back();
    for (std::size_t j = 0; j < first.q_distance.size(); ++j) {
        if (!(last.q_distance[j] < first.q_distance[j])) return false;
        if (!(last.w_distance[j] < first.w_distance[j])) return false;
    }
    return true;
}

double ZeroDistributionReport::final_max() const
{
    if (rows.empty()) return NAN;
    double worst = 0.0;
    for (double v : rows.back().q_distance) worst = std::max(worst, v);
    for (double v : rows.back().w_distance) worst = std::max(worst, v);
    return worst;
}

ZeroDistributionReport zero_distribution_experiment(const AngelescoSystem& system, const RaySchedule& schedule,
                                                    ApproximantKind kind, const EquilibriumSolution& equilibrium,
                                                    const FixedPointOptions* options)
{
    const std::size_t m = system.m();
    if (schedule.ray().m() != m) fail(ErrorKind::validation, "ray length does not match the system");
    if (equilibrium.components.size() != 2 * m)
        fail(ErrorKind::validation, "equilibrium solution has " + std::to_string(equilibrium.components.size()) +
                                        " components, expected " + std::to_string(2 * m));
    const auto want = kind == ApproximantKind::linear ? InteractionKind::C1 : InteractionKind::C2;
    if (equilibrium.kind != want)
        fail(ErrorKind::validation, std::string("a ") + to_string(kind) + " experiment needs the " +
                                        (want == InteractionKind::C1 ? "C1" : "C2") + " equilibrium");

    const auto mps = solve_schedule(system, schedule, kind, options);
    ZeroDistributionReport report;
    report.kind = kind;
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        ZeroDistributionRow row;
        row.size = schedule.sizes()[i];
        row.n = schedule.multi_index(i);
        for (std::size_t j = 0; j < m; ++j) {
            const auto& qz = mps[i].q_zeros[j];
            row.q_distance.push_back(qz.empty() ? NAN
                                                : cdf_distance(zero_counting_measure(qz), equilibrium.components[j]));
            const auto& w = mps[i].node_sets[j].nodes;
            row.w_distance.push_back(w.empty() ? NAN
                                               : cdf_distance(zero_counting_measure(w),
                                                              equilibrium.components[m + j]));
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

double extremal_constant_root(const MultipointPade& mp, const AngelescoSystem& system, std::size_t j)
{
    if (j >= system.m()) fail(ErrorKind::validation, "branch index out of range");
    const int total = mp.n.total();
    if (total == 0) fail(ErrorKind::validation, "extremal constant needs |n| >= 1");
    auto log_integral = [&](int order) {
        const Quadrature& q = gauss_quadrature(system.sigma(j), order);
        std::vector<double> terms(q.size());
        for (std::size_t i = 0; i < q.size(); ++i) {
            const double t = q.nodes[i];
            terms[i] = std::log(q.weights[i]) + 2.0 * log_root_product<double>(mp.q_zeros[j], t) +
                       mp.log_abs_cofactor(j, t) - log_root_product<double>(mp.node_sets[j].nodes, t);
        }
        return log_sum_exp(terms);
    };
    int order = mp.branch_orders[j];
    double prev = log_integral(order);
    for (int round = 0; round < 4; ++round) {
        order *= 2;
        const double next = log_integral(order);
        const bool done = std::abs(next - prev) < 1e-13;
        prev = next;
        if (done) break;
    }
    return std::exp(prev / total);
}

double RateReport::max_relative_deviation() const
{
    double worst = 0.0;
    for (const auto& f : fits) worst = std::max(worst, f.relative_deviation);
    return worst;
}

RateReport rate_experiment(const AngelescoSystem& system, const RaySchedule& schedule, ApproximantKind kind,
                           const std::vector<Complex>& test_points, const EquilibriumSolution& equilibrium,
                           const InteractionMatrix& C, const FixedPointOptions* options)
{
    const std::size_t m = system.m();
    const RayVector& p = schedule.ray();
    if (p.m() != m) fail(ErrorKind::validation, "ray length does not match the system");
    if (C.size() != 2 * m || equilibrium.components.size() != 2 * m)
        fail(ErrorKind::validation, "equilibrium data does not match the system");
    std::vector<std::string> problems;
    std::vector<Interval> all{system.sigma0().interval()};
    for (const auto& s : system.sigmas()) all.push_back(s.interval());
    for (const Complex& z : test_points)
        for (const auto& I : all)
            if (I.distance(z) <= 0.1)
                problems.push_back("test point " + fmt(z.real()) + (z.imag() < 0 ? "" : "+") + fmt(z.imag()) +
                                   "i lies within 0.1 of [" + fmt(I.lo) + ", " + fmt(I.hi) + "]");
    if (!problems.empty()) fail(ErrorKind::domain, problems.front(), problems);

    const auto mps = solve_schedule(system, schedule, kind, options);
    std::vector<Complex> zs = test_points;
    std::sort(zs.begin(), zs.end(), complex_less);

    RateReport report;
    report.kind = kind;
    const std::size_t S = schedule.size();
    const std::size_t top = S / 2;
    const double floor_log = std::log(1e-300);
    for (std::size_t j = 0; j < m; ++j) {
        for (const Complex& z : zs) {
            const double theo = rate_function(equilibrium, C, p, j, z);
            if (theo > 1.0) report.divergence_points.emplace_back(j, z);
            std::vector<double> xs, ys;
            RateFit fit;
            fit.j = j;
            fit.z = z;
            fit.theo = theo;
            for (std::size_t i = 0; i < S; ++i) {
                const int size = schedule.sizes()[i];
                const double le = log_abs_remainder(mps[i], system, j, z);
                if (le < floor_log) {
                    fit.truncated = true;
                    break;
                }
                report.rows.push_back({j, z, size, std::exp(le), le, std::exp(le / size), theo});
                if (i >= top) {
                    xs.push_back(size);
                    ys.push_back(le);
                }
            }
            fit.sizes_used = static_cast<int>(xs.size());
            if (xs.size() >= 2) {
                const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
                const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
                double sxy = 0.0, sxx = 0.0;
                for (std::size_t i = 0; i < xs.size(); ++i) {
                    sxy += (xs[i] - mx) * (ys[i] - my);
                    sxx += (xs[i] - mx) * (xs[i] - mx);
                }
                fit.fitted = std::exp(sxy / sxx);
                fit.relative_deviation = std::abs(fit.fitted - theo) / theo;
            } else {
                fit.fitted = NAN;
                fit.relative_deviation = INFINITY;
            }
            report.fits.push_back(fit);
        }
    }

    for (std::size_t j = 0; j < m; ++j) {
        const double target = std::exp(-equilibrium.constants[j] / p[j]);
        std::vector<double> dev;
        for (std::size_t i = 0; i < S; ++i) {
            if (mps[i].n.node_count(j) == 0) continue;
            const double v = extremal_constant_root(mps[i], system, j);
            report.extremal.push_back({j, schedule.sizes()[i], v, target});
            if (i >= top) dev.push_back(std::abs(v - target));
        }
        bool mono = dev.size() >= 2;
        for (std::size_t i = 1; i < dev.size(); ++i) mono = mono && dev[i] <= dev[i - 1];
        report.extremal_monotone.push_back(mono);
    }
    report.note = report.divergence_points.empty()
                      ? "no test point falls in the divergence region; divergence check skipped"
                      : std::to_string(report.divergence_points.size()) + " test point(s) in the divergence region";
    return report;
}

} // namespace fpade
