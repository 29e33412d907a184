#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <fpade/error.hpp>
#include <fpade/linear_fp.hpp>
#include <fpade/nonlinear_fp.hpp>
#include <fpade/orthopoly.hpp>

#include "json.hpp"

namespace fp {

using nlohmann::json;

std::string format_real(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

/// Small CSV builder; every row is written as given, callers keep rows sorted.
class Csv {
public:
    explicit Csv(std::string header) { out_ << header << '\n'; }

    template <class... T>
    void row(const T&... cells)
    {
        bool first = true;
        ((out_ << (first ? "" : ",") << cell(cells), first = false), ...);
        out_ << '\n';
    }

    [[nodiscard]] std::string str() const { return out_.str(); }

private:
    static std::string cell(double v) { return format_real(v); }
    static std::string cell(int v) { return std::to_string(v); }
    static std::string cell(std::size_t v) { return std::to_string(v); }
    static std::string cell(const std::string& s) { return s; }
    static std::string cell(const char* s) { return s; }
    std::ostringstream out_;
};

json real(double v) { return std::isfinite(v) ? json(v) : json(format_real(v)); }

json reals(const std::vector<double>& v)
{
    json a = json::array();
    for (double x : v) a.push_back(real(x));
    return a;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

const fpade::AngelescoSystem& system_of(const ExperimentConfig& c) { return *c.system; }

void polynomial_rows(Csv& csv, const std::string& name, const fpade::PolynomialRep& p)
{
    const auto& c = p.coeffs();
    for (std::size_t k = 0; k < c.size(); ++k) csv.row(name, p.basis().lo, p.basis().hi, k, c[k]);
}

void zero_rows(Csv& csv, const fpade::MultipointPade& mp)
{
    for (std::size_t j = 0; j < mp.q_zeros.size(); ++j)
        for (std::size_t i = 0; i < mp.q_zeros[j].size(); ++i) csv.row("q", j + 1, i + 1, mp.q_zeros[j][i]);
    for (std::size_t j = 0; j < mp.node_sets.size(); ++j)
        for (std::size_t i = 0; i < mp.node_sets[j].nodes.size(); ++i)
            csv.row("w", j + 1, i + 1, mp.node_sets[j].nodes[i]);
}

json trace_json(const std::vector<fpade::IterationRecord>& trace)
{
    json t = json::array();
    for (const auto& r : trace) t.push_back({{"iteration", r.iteration}, {"displacement", real(r.displacement)},
                                             {"damping", real(r.damping)}});
    return t;
}

std::vector<Artifact> run_orthopoly(const ExperimentConfig& cfg)
{
    const auto& sys = system_of(cfg);
    const auto& ob = *cfg.orthopoly;
    const fpade::MeasureSpec& spec = ob.measure == 0 ? sys.sigma0() : sys.sigma(ob.measure - 1);
    const auto table = fpade::recurrence_coefficients(spec, ob.degree);
    Csv csv("k,a,b");
    for (int k = 0; k <= ob.degree; ++k)
        csv.row(k, table.a[static_cast<std::size_t>(k)],
                k < static_cast<int>(table.b.size()) ? table.b[static_cast<std::size_t>(k)] : NAN);
    fpade::JacobiMatrix J;
    J.a.assign(table.a.begin(), table.a.begin() + ob.degree);
    J.b.assign(table.b.begin(), table.b.begin() + (ob.degree - 1));
    json summary = {{"measure", spec.describe()},
                    {"degree", ob.degree},
                    {"norm0", real(table.norm0)},
                    {"zeros", reals(fpade::tridiagonal_eigenvalues(J))}};
    return {{"orthopoly.csv", csv.str()}, {"orthopoly.json", dump(summary)}};
}

std::vector<Artifact> run_linear(const ExperimentConfig& cfg)
{
    const auto& sys = system_of(cfg);
    const auto& n = *cfg.multi_index;
    const auto approx = fpade::solve_linear_fp(sys, n, solver_options(cfg, fpade::ApproximantKind::linear));
    Csv coeffs("poly,basis_lo,basis_hi,k,coefficient");
    polynomial_rows(coeffs, "Q", approx.Q);
    for (std::size_t j = 0; j < approx.P.size(); ++j) polynomial_rows(coeffs, "P" + std::to_string(j + 1), approx.P[j]);
    Csv zeros("family,j,index,value");
    zero_rows(zeros, approx.interpolant);

    json counts = json::array();
    for (std::size_t j = 0; j < sys.m(); ++j)
        counts.push_back(fpade::remainder_sign_changes(approx, sys, j).size());
    json res = json::array();
    json rel = json::array();
    for (std::size_t j = 0; j < approx.fourier_residuals.size(); ++j) {
        res.push_back(reals(approx.fourier_residuals[j]));
        rel.push_back(reals(approx.fourier_relative[j]));
    }
    json summary = {{"multi_index", n.values()},
                    {"fourier_residuals", res},
                    {"fourier_relative", rel},
                    {"max_fourier_residual", real(approx.max_fourier_residual())},
                    {"sign_change_counts", counts},
                    {"trace", trace_json(approx.trace)}};
    return {{"linear_coefficients.csv", coeffs.str()},
            {"linear_zeros.csv", zeros.str()},
            {"linear_residuals.json", dump(summary)}};
}

std::vector<Artifact> run_nonlinear(const ExperimentConfig& cfg)
{
    const auto& sys = system_of(cfg);
    const auto& n = *cfg.multi_index;
    const auto approx = fpade::fixed_point_solve(sys, n, solver_options(cfg, fpade::ApproximantKind::nonlinear));
    Csv coeffs("poly,basis_lo,basis_hi,k,coefficient");
    polynomial_rows(coeffs, "T", approx.T);
    for (std::size_t j = 0; j < approx.S.size(); ++j) polynomial_rows(coeffs, "S" + std::to_string(j + 1), approx.S[j]);
    Csv zeros("family,j,index,value");
    zero_rows(zeros, approx.interpolant);
    json counts = json::array();
    for (std::size_t j = 0; j < sys.m(); ++j)
        counts.push_back(fpade::remainder_sign_changes(approx, sys, j).size());
    json summary = {{"multi_index", n.values()},
                    {"residual_check", real(fpade::residual_check(approx, sys))},
                    {"self_consistency", real(fpade::self_consistency(approx, sys))},
                    {"sign_change_counts", counts},
                    {"trace", trace_json(approx.trace)}};
    return {{"nonlinear_coefficients.csv", coeffs.str()},
            {"nonlinear_zeros.csv", zeros.str()},
            {"nonlinear_residuals.json", dump(summary)}};
}

fpade::InteractionMatrix matrix_for(fpade::InteractionKind kind, const fpade::RayVector& p)
{
    return kind == fpade::InteractionKind::C1 ? fpade::interaction_matrix_linear(p)
                                              : fpade::interaction_matrix_nonlinear(p);
}

json equilibrium_json(const fpade::EquilibriumSolution& sol)
{
    json supports = json::array();
    for (const auto& c : sol.components) {
        std::size_t s = 0;
        for (bool b : c.support_mask()) s += b;
        supports.push_back(s);
    }
    return {{"kind", sol.kind == fpade::InteractionKind::C1 ? "C1" : "C2"},
            {"constants", reals(sol.constants)},
            {"kkt_violation", real(sol.kkt_violation)},
            {"energy", real(sol.energy)},
            {"iterations", sol.iterations},
            {"support_sizes", supports}};
}

std::vector<Artifact> run_equilibrium(const ExperimentConfig& cfg)
{
    const auto& sys = system_of(cfg);
    const auto& eb = *cfg.equilibrium;
    const fpade::RayVector p(eb.ray);
    const auto C = matrix_for(eb.kind, p);
    const auto sol = fpade::solve_equilibrium(C, fpade::equilibrium_intervals(sys), eb.grid_size, eb.tol);
    Csv csv("component,grid_point,mass");
    for (std::size_t c = 0; c < sol.components.size(); ++c)
        for (std::size_t i = 0; i < sol.components[c].grid.size(); ++i)
            csv.row(c + 1, sol.components[c].grid[i], sol.components[c].masses[i]);
    json summary = equilibrium_json(sol);
    summary["ray"] = eb.ray;
    summary["grid_size"] = eb.grid_size;
    return {{"equilibrium.csv", csv.str()}, {"equilibrium.json", dump(summary)}};
}

struct ScheduleSetup {
    fpade::RaySchedule schedule;
    fpade::InteractionMatrix C;
    fpade::EquilibriumSolution equilibrium;
    fpade::FixedPointOptions options;
};

ScheduleSetup schedule_setup(const ExperimentConfig& cfg)
{
    const auto& sb = *cfg.schedule;
    const auto& eb = *cfg.equilibrium;
    fpade::RayVector p(sb.ray);
    const auto kind = sb.kind == fpade::ApproximantKind::linear ? fpade::InteractionKind::C1
                                                                : fpade::InteractionKind::C2;
    auto C = matrix_for(kind, p);
    auto sol = fpade::solve_equilibrium(C, fpade::equilibrium_intervals(system_of(cfg)), eb.grid_size, eb.tol);
    return {fpade::RaySchedule(p, sb.sizes), std::move(C), std::move(sol), solver_options(cfg, sb.kind)};
}

std::vector<Artifact> run_zeros(const ExperimentConfig& cfg)
{
    const auto& sys = system_of(cfg);
    const auto setup = schedule_setup(cfg);
    const auto kind = cfg.schedule->kind;
    const auto report =
        fpade::zero_distribution_experiment(sys, setup.schedule, kind, setup.equilibrium, &setup.options);
    Csv csv("kind,size,j,family,distance");
    for (const auto& r : report.rows)
        for (std::size_t j = 0; j < r.q_distance.size(); ++j) {
            csv.row(fpade::to_string(kind), r.size, j + 1, "q", r.q_distance[j]);
            csv.row(fpade::to_string(kind), r.size, j + 1, "w", r.w_distance[j]);
        }
    json summary = {{"kind", fpade::to_string(kind)},
                    {"ray", cfg.schedule->ray},
                    {"sizes", cfg.schedule->sizes},
                    {"ray_deviation", real(setup.schedule.max_deviation())},
                    {"decreasing", report.decreasing()},
                    {"final_max_distance", real(report.final_max())},
                    {"equilibrium", equilibrium_json(setup.equilibrium)}};
    return {{"zeros.csv", csv.str()}, {"zeros.json", dump(summary)}};
}

std::vector<Artifact> run_rates(const ExperimentConfig& cfg)
{
    const auto& sys = system_of(cfg);
    const auto setup = schedule_setup(cfg);
    const auto kind = cfg.schedule->kind;
    const auto report = fpade::rate_experiment(sys, setup.schedule, kind, cfg.test_points, setup.equilibrium,
                                               setup.C, &setup.options);
    Csv csv("kind,j,z_re,z_im,size,err,emp_rate,theo_rate");
    for (const auto& r : report.rows)
        csv.row(fpade::to_string(kind), r.j + 1, r.z.real(), r.z.imag(), r.size, r.err, r.emp_rate, r.theo_rate);
    json fits = json::array();
    for (const auto& f : report.fits)
        fits.push_back({{"j", f.j + 1},
                        {"z", {real(f.z.real()), real(f.z.imag())}},
                        {"fitted", real(f.fitted)},
                        {"theoretical", real(f.theo)},
                        {"relative_deviation", real(f.relative_deviation)},
                        {"sizes_used", f.sizes_used},
                        {"truncated", f.truncated}});
    json extremal = json::array();
    for (const auto& e : report.extremal)
        extremal.push_back({{"j", e.j + 1}, {"size", e.size}, {"value", real(e.value)}, {"target", real(e.target)}});
    json mono = json::array();
    for (bool b : report.extremal_monotone) mono.push_back(b);
    json summary = {{"kind", fpade::to_string(kind)},
                    {"fits", fits},
                    {"extremal", extremal},
                    {"extremal_monotone", mono},
                    {"max_relative_deviation", real(report.max_relative_deviation())},
                    {"divergence_points", report.divergence_points.size()},
                    {"note", report.note},
                    {"equilibrium", equilibrium_json(setup.equilibrium)}};
    return {{"rates.csv", csv.str()}, {"rates.json", dump(summary)}};
}

} // namespace

std::vector<Artifact> run_command(const ExperimentConfig& config)
{
    switch (config.command) {
    case Command::orthopoly: return run_orthopoly(config);
    case Command::linear: return run_linear(config);
    case Command::nonlinear: return run_nonlinear(config);
    case Command::equilibrium: return run_equilibrium(config);
    case Command::zeros: return run_zeros(config);
    case Command::rates: return run_rates(config);
    }
    fpade::fail(fpade::ErrorKind::validation, "unknown command");
}

void write_artifacts(const std::filesystem::path& dir, const std::vector<Artifact>& artifacts)
{
    std::filesystem::create_directories(dir);
    for (const auto& a : artifacts) {
        const auto target = dir / a.name;
        auto tmp = target;
        tmp += ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            out << a.content;
            out.flush();
            if (!out) {
                std::error_code ec;
                std::filesystem::remove(tmp, ec);
                throw std::runtime_error("cannot write " + tmp.string());
            }
        }
        std::filesystem::rename(tmp, target);
    }
}

} // namespace fp
