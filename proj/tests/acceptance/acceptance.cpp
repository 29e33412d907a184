/// Acceptance harness: `fp_acceptance [criterion...]` prints one line per
/// criterion and exits nonzero when any of them fails.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fpade/asymptotics.hpp>
#include <fpade/equilibrium.hpp>
#include <fpade/error.hpp>
#include <fpade/linear_fp.hpp>
#include <fpade/measures.hpp>
#include <fpade/multipoint_pade.hpp>
#include <fpade/nonlinear_fp.hpp>
#include <fpade/orthopoly.hpp>

#include "json.hpp"

using namespace fpade;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string summary;
};

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

/// All multi-indices of the reference system with 1 <= |n| <= max_total.
std::vector<MultiIndex> indices_up_to(int max_total)
{
    std::vector<MultiIndex> out;
    for (int t = 1; t <= max_total; ++t)
        for (int a = 0; a <= t; ++a) out.emplace_back(std::vector<int>{a, t - a});
    return out;
}

std::string read_file(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// ---------------------------------------------------------------------------

Outcome quadrature_and_orthopoly()
{
    double moment_err = 0.0;
    const std::vector<std::pair<double, double>> weights = {{0, 0}, {-0.5, -0.5}, {0.5, -0.3}, {2.0, 1.5}, {-0.8, 3.0}};
    for (const auto& [a, b] : weights) {
        const auto spec = MeasureSpec::jacobi(-1, 1, a, b);
        for (int N = 1; N <= 64; ++N) {
            const Quadrature& q = gauss_quadrature(spec, N);
            for (int k = 0; k <= 2 * N - 1; ++k) {
                // int ((1 + x)/2)^k dmu = 2^(a+b+1) B(b + k + 1, a + 1)
                const double exact = std::exp((a + b + 1) * std::log(2.0) + std::lgamma(b + k + 1) +
                                              std::lgamma(a + 1) - std::lgamma(a + b + k + 2));
                const double got = q.integrate([k](double x) { return std::pow(0.5 * (1 + x), k); });
                moment_err = std::max(moment_err, std::abs(got / exact - 1.0));
            }
        }
    }

    double ortho_err = 0.0;
    const auto sys = reference_system();
    std::vector<MeasureSpec> specs = {sys.sigma0(), sys.sigma(0), sys.sigma(1),
                                      MeasureSpec(Interval(-1, 1), TabulatedDensity{{1.0, 2.0, 0.5, 1.5, 1.0}})};
    const int n = 40;
    for (const auto& spec : specs) {
        const RecurrenceTable t = recurrence_coefficients(spec, n);
        const Quadrature& q = gauss_quadrature(spec, n + 8);
        std::vector<double> gram((n + 1) * (n + 1), 0.0), l(n + 1);
        for (std::size_t i = 0; i < q.size(); ++i) {
            eval_orthonormal_all(t, n, q.nodes[i], l);
            for (int a = 0; a <= n; ++a)
                for (int b = 0; b <= n; ++b) gram[a * (n + 1) + b] += q.weights[i] * l[a] * l[b];
        }
        for (int a = 0; a <= n; ++a)
            for (int b = 0; b <= n; ++b) ortho_err = std::max(ortho_err, std::abs(gram[a * (n + 1) + b] - (a == b)));
    }
    return {moment_err < 1e-12 && ortho_err < 1e-10,
            fmt("moment error %.2e (N <= 64, tol 1e-12); orthonormality defect %.2e (degree <= 40, tol 1e-10)",
                moment_err, ortho_err)};
}

// ---------------------------------------------------------------------------

Outcome linear_structure()
{
    const auto sys = reference_system();
    int checked = 0, bad_degree = 0, bad_zeros = 0, bad_count = 0, series_agree = 0, series_total = 0;
    double worst_residual = 0.0;
    std::string first_problem;
    for (const MultiIndex& n : indices_up_to(12)) {
        ++checked;
        const auto a = solve_linear_fp(sys, n);
        if (a.Q.degree() != n.total() || !a.Q.is_monic()) {
            ++bad_degree;
            if (first_problem.empty()) first_problem = "degree at " + n.str();
        }
        try {
            check_zero_localization(a.interpolant, sys);
        } catch (const Error& e) {
            ++bad_zeros;
            if (first_problem.empty()) first_problem = e.what();
        }
        for (std::size_t j = 0; j < 2; ++j) {
            const auto sc = remainder_sign_changes(a, sys, j, SignChangeRoute::integral);
            if (static_cast<int>(sc.size()) != n.node_count(j)) {
                ++bad_count;
                if (first_problem.empty())
                    first_problem = fmt("%zu sign changes on branch %zu at %s", sc.size(), j + 1, n.str().c_str());
            }
            ++series_total;
            if (remainder_sign_changes(a, sys, j, SignChangeRoute::series).size() == sc.size()) ++series_agree;
        }
        worst_residual = std::max(worst_residual, a.max_fourier_residual());
    }
    const bool pass = bad_degree == 0 && bad_zeros == 0 && bad_count == 0 && worst_residual < 1e-9;
    std::string s = fmt("%d multi-indices with |n| <= 12: degree failures %d, zero localization failures %d, "
                        "sign-change count failures %d, max Fourier residual %.2e (tol 1e-9); "
                        "series route count agrees on %d/%d branches",
                        checked, bad_degree, bad_zeros, bad_count, worst_residual, series_agree, series_total);
    if (!first_problem.empty()) s += "; first problem: " + first_problem;
    return {pass, s};
}

// ---------------------------------------------------------------------------

Outcome remainder_identity()
{
    const auto sys = reference_system();
    double worst = 0.0, worst_cond = 0.0;
    int evaluations = 0;
    std::string worst_at;
    // The direct side sigma_j - p_j/q cancels by a factor |sigma_j| / |R|,
    // which grows quickly toward Delta_0; rho = 1.5 keeps it near 1e4.
    const double rho = 1.5;
    for (const MultiIndex& n : indices_up_to(10)) {
        const auto a = solve_linear_fp(sys, n);
        for (std::size_t j = 0; j < 2; ++j) {
            const Interval& I = sys.sigma(j).interval();
            for (int k = 0; k < 20; ++k) {
                const double th = 2.0 * std::numbers::pi * (k + 0.5) / 20.0;
                const Complex u = 0.5 * (rho * std::polar(1.0, th) + std::polar(1.0, -th) / rho);
                const Complex z = I.center() + I.half_width() * u;
                const auto [direct, integral] = remainder_identity_residual(a.interpolant, sys, j, z);
                const double rel = std::abs(direct - integral) / std::abs(integral);
                worst_cond = std::max(worst_cond, std::abs(markov_transform(sys.sigma(j), z)) / std::abs(integral));
                ++evaluations;
                if (rel > worst) {
                    worst = rel;
                    worst_at = fmt("%s, branch %zu, z = %.3f%+.3fi", n.str().c_str(), j + 1, z.real(), z.imag());
                }
            }
        }
    }
    return {worst < 1e-8,
            fmt("%d evaluations (|n| <= 10, 20 points per branch on the rho = %.1f ellipse of Delta_j): "
                "max relative gap %.2e (tol 1e-8) at %s; largest cancellation factor |sigma_j|/|R| %.1e",
                evaluations, rho, worst, worst_at.c_str(), worst_cond)};
}

// ---------------------------------------------------------------------------

Outcome nonlinear_fixed_point()
{
    const auto sys = reference_system();
    double worst_disp = 0.0, worst_res = 0.0, worst_self = 0.0;
    int count = 0, failures = 0, max_iters = 0;
    std::string first_problem;
    for (const MultiIndex& n : indices_up_to(10)) {
        ++count;
        try {
            const auto a = fixed_point_solve(sys, n);
            worst_disp = std::max(worst_disp, a.trace.back().displacement);
            max_iters = std::max(max_iters, a.trace.back().iteration);
            worst_res = std::max(worst_res, residual_check(a, sys));
            worst_self = std::max(worst_self, self_consistency(a, sys));
        } catch (const Error& e) {
            ++failures;
            if (first_problem.empty()) first_problem = n.str() + ": " + e.what();
        }
    }
    const bool pass = failures == 0 && worst_disp < 1e-10 && worst_res < 1e-9 && worst_self < 1e-9;
    std::string s = fmt("%d multi-indices with |n| <= 10: solver failures %d, final displacement %.2e (tol 1e-10), "
                        "residual %.2e (tol 1e-9), self-consistency %.2e (tol 1e-9), at most %d iterations",
                        count, failures, worst_disp, worst_res, worst_self, max_iters);
    if (!first_problem.empty()) s += "; first problem: " + first_problem;
    return {pass, s};
}

// ---------------------------------------------------------------------------

Outcome interaction_minors()
{
    std::mt19937 rng(20261016);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    double worst_c1 = 0.0, worst_c2 = 0.0;
    double c1_index_factor = 0.0;
    for (std::size_t m : {1u, 2u, 3u})
        for (int trial = 0; trial < 10; ++trial) {
            std::vector<double> p(m);
            double s = 0.0;
            for (auto& x : p) s += (x = u(rng));
            for (auto& x : p) x /= s;
            // with a single branch the only admissible ray is p = (1)
            const RayVector ray = m == 1 ? RayVector::unchecked(p) : RayVector(p);
            const auto m1 = principal_minors(interaction_matrix_linear(ray), ray);
            const auto m2 = principal_minors(interaction_matrix_nonlinear(ray), ray);
            for (std::size_t j = 0; j < m1.size(); ++j) {
                worst_c1 = std::max(worst_c1, m1[j].relative_error());
                worst_c2 = std::max(worst_c2, m2[j].relative_error());
                // deviation from the index-dependent factor (j + 1) instead of (m + 1)
                const double alt = m1[j].closed_form * (j + 1 > m ? double(j + 2) / double(m + 1) : 1.0);
                c1_index_factor = std::max(c1_index_factor, std::abs(m1[j].computed - alt) / std::abs(alt));
            }
        }
    return {worst_c1 < 1e-9 && worst_c2 < 1e-9,
            fmt("30 random rays, m in {1,2,3}: C1 max relative error %.2e, C2 max relative error %.2e (tol 1e-9); "
                "C1 minors match the factor (j + 1) to %.2e",
                worst_c1, worst_c2, c1_index_factor)};
}

// ---------------------------------------------------------------------------

Outcome equilibrium_solver()
{
    const std::size_t grid = 400;
    const double tol = 1e-6;

    InteractionMatrix scalar;
    scalar.entries = Eigen::MatrixXd::Constant(1, 1, 2.0);
    const Interval I(-1, 1);
    const auto arc = solve_equilibrium(scalar, {I}, grid, tol);
    const double arc_cdf = cdf_distance(arc.components[0], arcsine_measure(I, grid));
    const double arc_omega = std::abs(arc.constants[0] - 2.0 * std::log(2.0));

    const auto sys = reference_system();
    const RayVector p({0.5, 0.5});
    const auto intervals = equilibrium_intervals(sys);
    const auto C1 = interaction_matrix_linear(p);
    const auto C2 = interaction_matrix_nonlinear(p);
    const auto s1 = solve_equilibrium(C1, intervals, grid, tol);
    const auto s2 = solve_equilibrium(C2, intervals, grid, tol);

    auto mirror_gap = [](const EquilibriumSolution& s) {
        double g = 0.0;
        for (std::size_t k : {0u, 2u}) {
            DiscreteMeasure f = s.components[k];
            std::reverse(f.grid.begin(), f.grid.end());
            std::reverse(f.masses.begin(), f.masses.end());
            for (auto& x : f.grid) x = -x;
            const auto& other = s.components[k + 1];
            for (std::size_t i = 0; i < f.grid.size(); ++i) {
                if (std::abs(f.grid[i] - other.grid[i]) > 1e-12) return HUGE_VAL;
                f.grid[i] = other.grid[i];
            }
            g = std::max(g, cdf_distance(f, s.components[k + 1]));
        }
        return g;
    };
    const double mirror = std::max(mirror_gap(s1), mirror_gap(s2));

    std::size_t unsupported = 0;
    for (std::size_t k = 2; k < 4; ++k)
        for (bool b : s2.components[k].support_mask()) unsupported += !b;
    const double kkt = std::max({arc.kkt_violation, s1.kkt_violation, s2.kkt_violation});

    const bool pass = arc_cdf < 2e-2 && arc_omega < 1e-2 && mirror < 1e-3 && unsupported == 0 && kkt < 1e-3;
    return {pass, fmt("grid %zu: arcsine cdf distance %.2e (tol 2e-2), |omega - 2 log 2| %.2e (tol 1e-2); "
                      "mirror cdf distance %.2e (tol 1e-3); C2 base points without mass %zu of %zu; "
                      "KKT violation %.2e (tol 1e-3)",
                      grid, arc_cdf, arc_omega, mirror, unsupported, 2 * grid, kkt)};
}

// ---------------------------------------------------------------------------

Outcome zero_distribution()
{
    const nlohmann::json golden =
        nlohmann::json::parse(read_file(fs::path(FPADE_GOLDEN_DIR) / "zero_distribution.json"));
    const auto sys = reference_system();
    const RayVector p(golden.at("ray").get<std::vector<double>>());
    const RaySchedule schedule(p, golden.at("sizes").get<std::vector<int>>());
    const std::size_t grid = golden.at("grid_size").get<std::size_t>();
    const double threshold = golden.at("threshold").get<double>();
    const double drift_tol = golden.at("drift_tolerance").get<double>();
    const double eq_tol = golden.at("equilibrium_tol").get<double>();

    bool pass = true;
    std::string s = fmt("sizes %d..%d, grid %zu, threshold %.3f:", schedule.sizes().front(), schedule.sizes().back(),
                        grid, threshold);
    for (auto kind : {ApproximantKind::linear, ApproximantKind::nonlinear}) {
        const auto C = kind == ApproximantKind::linear ? interaction_matrix_linear(p) : interaction_matrix_nonlinear(p);
        const auto eq = solve_equilibrium(C, equilibrium_intervals(sys), grid, eq_tol);
        const auto rep = zero_distribution_experiment(sys, schedule, kind, eq);
        const auto& first = rep.rows.front();
        const auto& last = rep.rows.back();
        double q0 = 0, q1 = 0, w0 = 0, w1 = 0;
        for (std::size_t j = 0; j < p.m(); ++j) {
            q0 = std::max(q0, first.q_distance[j]);
            q1 = std::max(q1, last.q_distance[j]);
            w0 = std::max(w0, first.w_distance[j]);
            w1 = std::max(w1, last.w_distance[j]);
        }
        const auto& g = golden.at(to_string(kind));
        const double drift = std::max(std::abs(q1 - g.at("final_q").get<double>()),
                                      std::abs(w1 - g.at("final_w").get<double>()));
        const bool ok = rep.decreasing() && rep.final_max() < threshold && drift < drift_tol;
        pass = pass && ok;
        s += fmt(" %s q %.4f -> %.4f, w %.4f -> %.4f, drift from frozen values %.1e%s;", to_string(kind), q0, q1, w0,
                 w1, drift, rep.decreasing() ? "" : " (not decreasing)");
    }
    s.pop_back();
    return {pass, s};
}

// ---------------------------------------------------------------------------

Outcome rate_verification()
{
    const auto sys = reference_system();
    const RayVector p({0.5, 0.5});
    const RaySchedule schedule(p, {4, 8, 12, 16, 20, 24});
    const std::vector<Complex> points = {Complex(5, 0), Complex(0, 0.5), Complex(0, 2),
                                         Complex(-1.5, 1), Complex(2.5, 0.6), Complex(0, 4)};
    bool pass = true;
    std::string s = "6 test points, sizes 4..24:";
    for (auto kind : {ApproximantKind::linear, ApproximantKind::nonlinear}) {
        const auto C = kind == ApproximantKind::linear ? interaction_matrix_linear(p) : interaction_matrix_nonlinear(p);
        const auto eq = solve_equilibrium(C, equilibrium_intervals(sys), 400, 1e-6);
        const auto rep = rate_experiment(sys, schedule, kind, points, eq, C);
        const double dev = rep.max_relative_deviation();
        bool monotone = true;
        for (bool b : rep.extremal_monotone) monotone = monotone && b;
        double last_value = 0.0, target = 0.0;
        for (const auto& e : rep.extremal)
            if (e.j == 0 && e.size == schedule.sizes().back()) {
                last_value = e.value;
                target = e.target;
            }
        pass = pass && dev < 0.1 && monotone;
        s += fmt(" %s max deviation from %s %.2e (tol 0.1), extremal trend %s (%.5f toward %.5f), %zu divergence "
                 "points;",
                 to_string(kind), kind == ApproximantKind::linear ? "G_j" : "H_j", dev,
                 monotone ? "monotone" : "not monotone", last_value, target, rep.divergence_points.size());
    }
    s.pop_back();
    return {pass, s};
}

// ---------------------------------------------------------------------------

struct RunResult {
    int exit_code = -1;
    std::string err;
};

RunResult run_fp(const std::string& command, const fs::path& config, const fs::path& out)
{
    const fs::path err_file = out.string() + ".stderr";
    const std::string cmd = std::string("'") + FP_BINARY + "' " + command + " --config '" + config.string() +
                            "' --out '" + out.string() + "' > /dev/null 2> '" + err_file.string() + "'";
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.err = read_file(err_file);
    return r;
}

Outcome cli_determinism()
{
    const fs::path configs(FPADE_CONFIG_DIR);
    const fs::path root = fs::temp_directory_path() / fmt("fpade_acceptance_%d", static_cast<int>(::getpid()));
    fs::remove_all(root);
    fs::create_directories(root);

    int compared = 0, mismatched = 0, run_failures = 0;
    std::string problem;
    for (const char* cmd : {"orthopoly", "linear", "nonlinear", "equilibrium", "zeros", "rates"}) {
        const fs::path cfg = configs / (std::string(cmd) + ".json");
        const fs::path a = root / (std::string(cmd) + "_a");
        const fs::path b = root / (std::string(cmd) + "_b");
        const auto ra = run_fp(cmd, cfg, a);
        const auto rb = run_fp(cmd, cfg, b);
        if (ra.exit_code != 0 || rb.exit_code != 0) {
            ++run_failures;
            if (problem.empty()) problem = std::string(cmd) + " failed: " + ra.err + rb.err;
            continue;
        }
        std::size_t files = 0;
        for (const auto& entry : fs::directory_iterator(a)) {
            ++files;
            ++compared;
            const fs::path other = b / entry.path().filename();
            if (!fs::exists(other) || read_file(entry.path()) != read_file(other)) {
                ++mismatched;
                if (problem.empty()) problem = "differs: " + entry.path().filename().string();
            }
        }
        if (files != static_cast<std::size_t>(std::distance(fs::directory_iterator(b), fs::directory_iterator{})))
            ++mismatched;
    }

    struct Invalid {
        const char* file;
        const char* command;
        std::size_t min_details;
    };
    int invalid_ok = 0;
    const std::vector<Invalid> invalid = {{"overlap.json", "linear", 1},      {"ray_sum.json", "rates", 1},
                                          {"ceiling.json", "linear", 1},      {"malformed.json", "linear", 0},
                                          {"many_errors.json", "linear", 6}};
    for (const auto& inv : invalid) {
        const fs::path out = root / (std::string("invalid_") + inv.file);
        const auto r = run_fp(inv.command, configs / "invalid" / inv.file, out);
        bool ok = r.exit_code == 2 && !fs::exists(out);
        try {
            const auto j = nlohmann::json::parse(r.err);
            ok = ok && j.at("error") == "validation" && j.at("details").size() >= inv.min_details;
        } catch (const std::exception&) {
            ok = false;
        }
        if (ok)
            ++invalid_ok;
        else if (problem.empty())
            problem = fmt("%s exited %d: %s", inv.file, r.exit_code, r.err.c_str());
    }
    fs::remove_all(root);

    const bool pass = run_failures == 0 && mismatched == 0 && compared > 0 && invalid_ok == int(invalid.size());
    std::string s = fmt("6 commands run twice: %d artifacts compared, %d differ, %d run failures; "
                        "%d/%zu invalid configs exit 2 with aggregated diagnostics",
                        compared, mismatched, run_failures, invalid_ok, invalid.size());
    if (!problem.empty()) s += "; " + problem;
    return {pass, s};
}

struct Criterion {
    int id;
    const char* title;
    double budget_seconds;
    std::function<Outcome()> run;
};

} // namespace

int main(int argc, char** argv)
{
    const std::vector<Criterion> criteria = {
        {1, "quadrature and orthonormal polynomials", 5, quadrature_and_orthopoly},
        {2, "linear Fourier-Pade structure", 120, linear_structure},
        {3, "remainder identity", 60, remainder_identity},
        {4, "non-linear fixed point", 300, nonlinear_fixed_point},
        {5, "interaction matrix minors", 1, interaction_minors},
        {6, "equilibrium solver", 120, equilibrium_solver},
        {7, "zero distribution", 600, zero_distribution},
        {8, "rates", 900, rate_verification},
        {9, "CLI determinism", 60, cli_determinism},
    };

    std::vector<int> wanted;
    for (int i = 1; i < argc; ++i) wanted.push_back(std::atoi(argv[i]));
    if (wanted.empty())
        for (const auto& c : criteria) wanted.push_back(c.id);

    bool all = true;
    for (int id : wanted) {
        if (id < 1 || id > static_cast<int>(criteria.size())) {
            std::fprintf(stderr, "unknown criterion %d\n", id);
            return 2;
        }
        const Criterion& c = criteria[id - 1];
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const Error& e) {
            o = {false, std::string("error: ") + e.what()};
            for (const auto& d : e.details()) o.summary += "; " + d;
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = secs < c.budget_seconds;
        const bool pass = o.pass && in_time;
        all = all && pass;
        std::printf("[%s] %d %s: %s; %.2f s (budget %.0f s)%s\n", pass ? "PASS" : "FAIL", c.id, c.title,
                    o.summary.c_str(), secs, c.budget_seconds, in_time ? "" : ", over budget");
        std::fflush(stdout);
    }
    return all ? 0 : 1;
}
